#include "vbm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <ostream>

#include "vbm/error.hpp"

namespace vbm {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": sizes " + std::to_string(a) + " and " +
                    std::to_string(b));
  }
}

void check_dim(std::size_t n) {
  if (n == 0 || n > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument,
                "matrix dimension must be in [1, " + std::to_string(kMaxDim) +
                    "], got " + std::to_string(n));
  }
}

}  // namespace

Vec& Vec::operator+=(const Vec& o) {
  require_same_size(size(), o.size(), "vector add");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_size(size(), o.size(), "vector subtract");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

double Vec::sum() const noexcept {
  double s = 0.0;
  for (double x : v_) s += x;
  return s;
}

double Vec::max() const {
  if (v_.empty()) throw Error(ErrorCode::InvalidArgument, "max of empty vector");
  return *std::max_element(v_.begin(), v_.end());
}

double Vec::min() const {
  if (v_.empty()) throw Error(ErrorCode::InvalidArgument, "min of empty vector");
  return *std::min_element(v_.begin(), v_.end());
}

double Vec::norm_inf() const noexcept {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double Vec::norm2() const noexcept {
  double s = 0.0;
  for (double x : v_) s += x * x;
  return std::sqrt(s);
}

bool Vec::all_finite() const noexcept {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

Vec abs(Vec a) {
  for (double& x : a) x = std::abs(x);
  return a;
}

Vec cwise_min(Vec a, const Vec& b) {
  require_same_size(a.size(), b.size(), "cwise_min");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::min(a[i], b[i]);
  return a;
}

bool leq(const Vec& a, const Vec& b, double tol) {
  require_same_size(a.size(), b.size(), "leq");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] <= b[i] + tol)) return false;
  }
  return true;
}

double max_excess(const Vec& a, const Vec& b) {
  require_same_size(a.size(), b.size(), "max_excess");
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

std::ostream& operator<<(std::ostream& os, const Vec& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  return os << ')';
}

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) { check_dim(n); }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  n_ = rows.size();
  check_dim(n_);
  a_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorCode::InvalidArgument, "matrix must be square");
    }
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::constant(std::size_t n, double value) {
  Matrix m(n);
  std::fill(m.a_.begin(), m.a_.end(), value);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorCode::InvalidArgument, "matrix must be square");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> Matrix::rows() const {
  std::vector<std::vector<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    out[i].assign(a_.begin() + i * n_, a_.begin() + (i + 1) * n_);
  }
  return out;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_size(n_, o.n_, "matrix add");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_size(n_, o.n_, "matrix subtract");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::pow(unsigned long long k) const {
  Matrix result = identity(n_);
  Matrix base = *this;
  while (k > 0) {
    if (k & 1ULL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double Matrix::max_entry() const {
  return *std::max_element(a_.begin(), a_.end());
}

double Matrix::min_entry() const {
  return *std::min_element(a_.begin(), a_.end());
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::max_diagonal() const {
  double m = (*this)(0, 0);
  for (std::size_t i = 1; i < n_; ++i) m = std::max(m, (*this)(i, i));
  return m;
}

double Matrix::norm_inf() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
    m = std::max(m, row);
  }
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(a_.begin(), a_.end(),
                     [](double x) { return std::isfinite(x); });
}

bool Matrix::is_diagonal(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && std::abs((*this)(i, j)) > tol) return false;
  return true;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.dim(), b.dim(), "matrix multiply");
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Matrix& a, const Vec& x) {
  require_same_size(a.dim(), x.size(), "matrix-vector multiply");
  Vec y(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_size(a.dim(), b.dim(), "max_abs_diff");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i)
    m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) os << ", ";
      os << m(i, j);
    }
    os << ']';
  }
  return os << ']';
}

}  // namespace vbm
