#include "vbm/matops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <sstream>

#include "vbm/error.hpp"

namespace vbm::matops {

namespace {

constexpr double kStabilization = 1e-9;
constexpr unsigned kMaxDoublings = 200;
constexpr double kDivergenceThreshold = 1e100;
constexpr unsigned long long kLinearPowers = 64;

void require_finite(const Matrix& m) {
  if (!m.all_finite()) {
    throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
  }
}

double max_root_modulus_quadratic(double b, double c) {
  // lambda^2 + b lambda + c
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::max(std::abs((-b + s) / 2.0), std::abs((-b - s) / 2.0));
  }
  return std::sqrt(std::max(c, 0.0));
}

double max_root_modulus_cubic(double a, double b, double c) {
  // lambda^3 + a lambda^2 + b lambda + c; depressed with lambda = t - a/3.
  using cd = std::complex<double>;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cd disc = std::sqrt(cd(q * q / 4.0 + p * p * p / 27.0, 0.0));
  cd u3 = -q / 2.0 + disc;
  if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
  const double shift = -a / 3.0;
  if (std::abs(u3) == 0.0) {
    // p = q = 0: triple root at the shift.
    return std::abs(shift);
  }
  const cd u = std::pow(u3, 1.0 / 3.0);
  const cd omega(-0.5, std::sqrt(3.0) / 2.0);
  double best = 0.0;
  cd uk = u;
  for (int k = 0; k < 3; ++k) {
    const cd t = uk - p / (3.0 * uk);
    best = std::max(best, std::abs(t + shift));
    uk *= omega;
  }
  return best;
}

}  // namespace

double closed_form_spectral_radius(const Matrix& m) {
  require_finite(m);
  const std::size_t n = m.dim();
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return max_root_modulus_quadratic(-tr, det);
  }
  if (n == 3) {
    const double tr = m(0, 0) + m(1, 1) + m(2, 2);
    const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
                          m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                          m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double det =
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
        m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
        m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    return max_root_modulus_cubic(-tr, minors, -det);
  }
  throw Error(ErrorCode::InvalidArgument,
              "closed-form spectral radius only for n <= 3");
}

SpectralRadius spectral_radius_report(const Matrix& m) {
  require_finite(m);
  SpectralRadius out;
  const std::size_t n = m.dim();

  // M^(2^j) = exp(log_scale) * p with ||p||_inf = 1.
  const double scale = m.max_abs();
  if (scale == 0.0) {
    out.value = 0.0;
    if (n <= 3) out.closed_form = 0.0;
    return out;
  }
  Matrix p = (1.0 / scale) * m;
  double norm = p.norm_inf();
  double log_scale = std::log(scale) + std::log(norm);
  p *= 1.0 / norm;

  double estimate = std::exp(log_scale);
  double power = 1.0;
  int stable_runs = 0;
  bool zero_power = false;
  unsigned j = 0;
  while (j < kMaxDoublings) {
    ++j;
    Matrix q = p * p;
    const double qn = q.norm_inf();
    if (qn == 0.0) {
      zero_power = true;
      break;
    }
    log_scale = 2.0 * log_scale + std::log(qn);
    power *= 2.0;
    p = (1.0 / qn) * q;
    const double next = std::exp(log_scale / power);
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (diff < kStabilization * (1.0 + estimate)) {
      if (++stable_runs >= 2) break;
    } else {
      stable_runs = 0;
    }
  }
  out.doublings = j;
  if (zero_power) {
    out.value = 0.0;
  } else if (!std::isfinite(estimate)) {
    out.value = std::numeric_limits<double>::max();
    out.unbounded = true;
  } else {
    out.value = estimate;
  }

  if (n <= 3) {
    const double cf = closed_form_spectral_radius(m);
    out.closed_form = cf;
    // Root finding near repeated roots loses about a third of the digits.
    out.cross_check_ok =
        out.unbounded || std::abs(cf - out.value) <= 1e-4 * (1.0 + out.value);
  }
  return out;
}

double spectral_radius(const Matrix& m) { return spectral_radius_report(m).value; }

bool is_positive(const Matrix& m, double tol) { return m.min_entry() >= -tol; }

bool is_z_pattern(const Matrix& m, double tol) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (i != j && m(i, j) > tol) return false;
  return true;
}

ConvergenceVerdict is_convergent_to_zero(const Matrix& m, double tol,
                                         unsigned long long kmax) {
  require_finite(m);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (kmax < 1) throw Error(ErrorCode::InvalidArgument, "kmax must be >= 1");
  if (!is_positive(m, tol)) {
    throw Error(ErrorCode::NotNonnegative,
                "convergence to zero is characterized for nonnegative matrices");
  }

  ConvergenceVerdict v;
  v.spectral_radius = spectral_radius(m);

  // Power test: linear powers first for a tight witness, then squaring.
  enum class Outcome { converged, diverging, undecided } outcome =
      Outcome::undecided;
  Matrix p = m;
  unsigned long long k = 1;
  auto inspect = [&]() {
    v.power = k;
    v.power_max_entry = p.max_entry();
    if (v.power_max_entry < tol) {
      outcome = Outcome::converged;
    } else if (!(v.power_max_entry <= kDivergenceThreshold)) {
      outcome = Outcome::diverging;
    }
    return outcome != Outcome::undecided;
  };
  bool decided = inspect();
  while (!decided && k < std::min(kmax, kLinearPowers)) {
    p = p * m;
    ++k;
    decided = inspect();
  }
  while (!decided && k <= kmax / 2) {
    p = p * p;
    k *= 2;
    decided = inspect();
  }
  v.diverging = outcome == Outcome::diverging;

  const double r = v.spectral_radius;
  const bool in_band = std::abs(r - 1.0) <= tol;
  if (outcome == Outcome::converged) {
    if (r < 1.0 - tol) {
      v.convergent = true;
      v.reason = "M^k < tol and r(M) < 1";
    } else if (in_band) {
      v.marginal = true;
      v.reason = "r(M) within tol of 1";
    } else {
      std::ostringstream os;
      os << "power test converged at k=" << k << " but r(M)=" << r;
      throw Error(ErrorCode::InternalError, os.str());
    }
  } else if (outcome == Outcome::diverging) {
    if (r < 1.0 - tol) {
      std::ostringstream os;
      os << "powers diverge at k=" << k << " but r(M)=" << r;
      throw Error(ErrorCode::InternalError, os.str());
    }
    v.marginal = in_band;
    v.reason = "power sequence diverges; r(M) >= 1";
  } else {
    if (r < 1.0 - tol) {
      v.marginal = true;
      v.reason = "powers did not drop below tol within kmax";
    } else {
      v.marginal = in_band;
      v.reason = "r(M) >= 1";
    }
  }
  return v;
}

Matrix neumann_inverse(const Matrix& m, double tol) {
  const auto verdict = is_convergent_to_zero(m, tol);
  if (!verdict.convergent) {
    throw Error(ErrorCode::NotConvergent,
                "Neumann series requires a matrix convergent to zero (" +
                    verdict.reason + ")");
  }
  Matrix sum = Matrix::identity(m.dim());
  Matrix power = m;
  for (int step = 0; step < 128; ++step) {
    const Matrix block = power * sum;
    sum += block;
    if (block.max_abs() < tol) return sum;
    power = power * power;
  }
  throw Error(ErrorCode::InternalError, "Neumann series failed to settle");
}

std::optional<Matrix> invert(const Matrix& m, double tol) {
  require_finite(m);
  const std::size_t n = m.dim();
  const double scale = m.max_abs();
  if (scale == 0.0) return std::nullopt;
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= tol * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::optional<Vec> null_vector(const Matrix& m, double tol) {
  require_finite(m);
  const std::size_t n = m.dim();
  const double scale = m.max_abs();
  if (scale == 0.0) {
    Vec e(n);
    e[0] = 1.0;
    return e;
  }
  // Reduced row echelon form; first free column yields the null vector.
  Matrix a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  std::optional<std::size_t> free_col;
  for (std::size_t col = 0; col < n; ++col) {
    if (row >= n) {
      if (!free_col) free_col = col;
      continue;
    }
    std::size_t piv = row;
    for (std::size_t r = row; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= tol * scale) {
      if (!free_col) free_col = col;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(row, j));
    const double d = a(row, col);
    for (std::size_t j = 0; j < n; ++j) a(row, j) /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a(r, j) -= f * a(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  if (!free_col) return std::nullopt;
  Vec x(n);
  x[*free_col] = 1.0;
  for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
    x[pivot_cols[r]] = -a(r, *free_col);
  }
  return x;
}

InversePositivity is_inverse_positive(const Matrix& m, double tol) {
  require_finite(m);
  InversePositivity out;
  auto inv = invert(m, tol);
  if (!inv) {
    out.reason = "singular";
    return out;
  }
  out.min_inverse_entry = inv->min_entry();
  if (out.min_inverse_entry >= -tol) {
    out.inverse_positive = true;
    out.inverse = std::move(inv);
    out.reason = "inverse is entrywise nonnegative";
  } else {
    out.reason = "inverse has a negative entry";
  }
  return out;
}

MonotoneSample is_monotone_sampled(const Matrix& m, std::size_t samples,
                                   std::uint64_t seed, double tol) {
  require_finite(m);
  if (samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  }
  const std::size_t n = m.dim();
  MonotoneSample out;

  auto feasible = [&](const Vec& x) {
    const Vec mx = m * x;
    return std::all_of(mx.begin(), mx.end(), [](double y) { return y >= 0.0; });
  };
  auto record = [&](const Vec& x) {
    ++out.feasible;
    if (x.min() < -tol && !out.witness) out.witness = x;
  };

  // Canonical candidates: M x = e_j, or x = +-null vector when singular.
  if (auto inv = invert(m, tol)) {
    for (std::size_t j = 0; j < n; ++j) {
      Vec x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = (*inv)(i, j);
      record(x);
    }
  } else if (auto z = null_vector(m, tol)) {
    record(*z);
    record(-1.0 * *z);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::size_t found = 0;
  while (found < samples && out.draws < kMaxMonotoneDraws) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = unit(rng);
    ++out.draws;
    if (!feasible(x)) continue;
    ++found;
    record(x);
  }

  if (out.witness) {
    out.verdict = Monotonicity::not_monotone;
  } else if (out.feasible == 0) {
    out.verdict = Monotonicity::inconclusive;
  } else {
    out.verdict = Monotonicity::monotone;
  }
  return out;
}

Splitting split_representation(const Matrix& m, double tol) {
  require_finite(m);
  if (!is_z_pattern(m, tol)) {
    throw Error(ErrorCode::NotZPattern,
                "an off-diagonal entry is positive; no sI - Mbar splitting");
  }
  Splitting sp;
  sp.s = m.max_diagonal() + 1.0;
  sp.mbar = sp.s * Matrix::identity(m.dim()) - m;
  sp.mbar_radius = spectral_radius(sp.mbar);
  sp.certified = sp.mbar_radius < sp.s * (1.0 - tol);
  return sp;
}

std::string to_string(BClass c) {
  switch (c) {
    case BClass::positive: return "positive";
    case BClass::inverse_positive: return "inverse_positive";
    case BClass::both: return "both";
    case BClass::neither: return "neither";
  }
  return "neither";
}

std::optional<BClass> parse_bclass(const std::string& s) {
  if (s == "positive") return BClass::positive;
  if (s == "inverse_positive") return BClass::inverse_positive;
  if (s == "both") return BClass::both;
  if (s == "neither") return BClass::neither;
  return std::nullopt;
}

BClass b_class(const Matrix& b, double tol) {
  const bool pos = is_positive(b, tol);
  const bool inv = is_inverse_positive(b, tol).inverse_positive;
  if (pos && inv) return BClass::both;
  if (pos) return BClass::positive;
  if (inv) return BClass::inverse_positive;
  return BClass::neither;
}

MatClassReport classify(const Matrix& m, double tol) {
  require_finite(m);
  MatClassReport r;
  r.matrix = m;
  r.tol = tol;
  r.spectral_radius = spectral_radius_report(m);
  r.positive = is_positive(m, tol);
  if (r.positive) r.convergent_to_zero = is_convergent_to_zero(m, tol);
  r.inverse_positive = is_inverse_positive(m, tol);
  if (is_z_pattern(m, tol)) r.splitting = split_representation(m, tol);
  return r;
}

}  // namespace vbm::matops
