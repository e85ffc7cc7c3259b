#pragma once

// Small dense vectors and square matrices. Vectors carry distances d(u,v),
// bounds, residuals and f-values as well as points of R^m; matrices are the
// n x n coefficient matrices (B, A, C, ...) with 1 <= n <= kMaxDim.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace vbm {

inline constexpr std::size_t kMaxDim = 8;
inline constexpr double kDefaultTol = 1e-9;

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double value = 0.0) : v_(n, value) {}
  Vec(std::initializer_list<double> values) : v_(values) {}
  explicit Vec(std::vector<double> values) : v_(std::move(values)) {}
  explicit Vec(std::span<const double> values)
      : v_(values.begin(), values.end()) {}

  static Vec ones(std::size_t n) { return Vec(n, 1.0); }

  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }

  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  const double* data() const noexcept { return v_.data(); }
  std::span<const double> span() const noexcept { return v_; }
  const std::vector<double>& values() const noexcept { return v_; }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

  // rho_1: sum of components.
  double sum() const noexcept;
  double max() const;
  double min() const;
  double norm_inf() const noexcept;
  double norm2() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> v_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);
Vec abs(Vec a);
Vec cwise_min(Vec a, const Vec& b);

// Componentwise a <= b + tol.
bool leq(const Vec& a, const Vec& b, double tol = 0.0);
// Largest componentwise excess a_i - b_i (negative when a < b strictly).
double max_excess(const Vec& a, const Vec& b);

std::ostream& operator<<(std::ostream& os, const Vec& v);

class Matrix {
 public:
  Matrix() = default;
  // Zero matrix of size n.
  explicit Matrix(std::size_t n);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);
  static Matrix constant(std::size_t n, double value);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t dim() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  std::span<const double> entries() const noexcept { return a_; }
  std::vector<std::vector<double>> rows() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  Matrix transpose() const;
  // M^k by repeated squaring; M^0 = I.
  Matrix pow(unsigned long long k) const;

  double max_entry() const;
  double min_entry() const;
  double max_abs() const noexcept;
  double max_diagonal() const;
  // Induced infinity norm (max absolute row sum).
  double norm_inf() const noexcept;
  bool all_finite() const noexcept;
  bool is_diagonal(double tol = 0.0) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Vec operator*(const Matrix& a, const Vec& x);

// max |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace vbm
