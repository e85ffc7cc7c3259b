#pragma once

// Matrix class oracles: convergence to zero, inverse positivity, monotonicity
// and the sI - Mbar splitting. Everything is tolerance-governed floating point;
// verdicts that fall inside the tolerance band around the decision boundary
// are reported as marginal.

#include <cstdint>
#include <optional>
#include <string>

#include "vbm/linalg.hpp"

namespace vbm::matops {

struct SpectralRadius {
  double value = 0.0;
  // Floating range exceeded; `value` is only a lower bound.
  bool unbounded = false;
  // Estimate taken from ||M^(2^doublings)||^(1/2^doublings).
  unsigned doublings = 0;
  // Characteristic-polynomial roots, available for n <= 3.
  std::optional<double> closed_form;
  bool cross_check_ok = true;
};

// Gelfand estimate r(M) = lim ||M^k||^(1/k) with k doubling. Powers are kept
// normalized so that the estimate never overflows; stops once two successive
// estimates agree to 1e-9 relative twice in a row.
SpectralRadius spectral_radius_report(const Matrix& m);
double spectral_radius(const Matrix& m);

// Largest root modulus of det(lambda I - M) in closed form, n <= 3.
double closed_form_spectral_radius(const Matrix& m);

struct ConvergenceVerdict {
  bool convergent = false;
  // |r(M) - 1| within tol, or the power test could not decide within kmax.
  bool marginal = false;
  double spectral_radius = 0.0;
  // Power k reached by the power test and max entry of M^k there.
  unsigned long long power = 0;
  double power_max_entry = 0.0;
  bool diverging = false;
  std::string reason;
};

inline constexpr unsigned long long kDefaultKmax = 1ULL << 50;

// Requires M >= -tol entrywise (throws NotNonnegative otherwise).
ConvergenceVerdict is_convergent_to_zero(const Matrix& m,
                                         double tol = kDefaultTol,
                                         unsigned long long kmax = kDefaultKmax);

// (I - M)^-1 as the Neumann series I + M + M^2 + ..., summed in doubling blocks
// sum_{k<2K} M^k = S_K + M^K S_K until the added block drops below tol.
// Throws NotConvergent if M is not convergent to zero.
Matrix neumann_inverse(const Matrix& m, double tol = kDefaultTol);

// Gauss-Jordan with partial pivoting. Returns nullopt when a pivot satisfies
// |pivot| <= tol * max|m_ij|.
std::optional<Matrix> invert(const Matrix& m, double tol = kDefaultTol);

// Nonzero x with Mx ~ 0 when M is singular under the same pivot rule.
std::optional<Vec> null_vector(const Matrix& m, double tol = kDefaultTol);

struct InversePositivity {
  bool inverse_positive = false;
  std::optional<Matrix> inverse;  // set iff inverse_positive
  double min_inverse_entry = 0.0;
  std::string reason;
};

InversePositivity is_inverse_positive(const Matrix& m,
                                      double tol = kDefaultTol);

enum class Monotonicity { monotone, not_monotone, inconclusive };

struct MonotoneSample {
  Monotonicity verdict = Monotonicity::inconclusive;
  std::size_t feasible = 0;
  std::size_t draws = 0;
  std::optional<Vec> witness;  // x with Mx >= 0 but x not >= 0
};

inline constexpr std::size_t kMaxMonotoneDraws = 100000;

// Property-test counterpart of is_inverse_positive: samples x with Mx >= 0
// (rejection sampling on [-1,1]^n plus the columns of M^-1, or a null vector
// when M is singular) and checks x >= -tol.
MonotoneSample is_monotone_sampled(const Matrix& m, std::size_t samples,
                                   std::uint64_t seed,
                                   double tol = kDefaultTol);

struct Splitting {
  double s = 0.0;
  Matrix mbar;
  double mbar_radius = 0.0;
  // s > r(Mbar): certifies inverse positivity of M = sI - Mbar.
  bool certified = false;
};

// M = sI - Mbar with s = max_i M_ii + 1. Throws NotZPattern if an off-diagonal
// entry exceeds tol.
Splitting split_representation(const Matrix& m, double tol = kDefaultTol);

bool is_positive(const Matrix& m, double tol = kDefaultTol);
bool is_z_pattern(const Matrix& m, double tol = kDefaultTol);

enum class BClass { positive, inverse_positive, both, neither };

std::string to_string(BClass c);
std::optional<BClass> parse_bclass(const std::string& s);
BClass b_class(const Matrix& b, double tol = kDefaultTol);

struct MatClassReport {
  Matrix matrix;
  double tol = kDefaultTol;
  SpectralRadius spectral_radius;
  bool positive = false;
  // Only defined for positive matrices.
  std::optional<ConvergenceVerdict> convergent_to_zero;
  InversePositivity inverse_positive;
  // Only defined for Z-pattern matrices.
  std::optional<Splitting> splitting;
};

MatClassReport classify(const Matrix& m, double tol = kDefaultTol);

}  // namespace vbm::matops
