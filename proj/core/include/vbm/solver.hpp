#pragma once

// Perov-type successive approximation in vector B-metric spaces, with
// matrix a-priori error certificates, stability checks and a hybrid
// contraction/search harness for coupled systems.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vbm/expr.hpp"
#include "vbm/linalg.hpp"
#include "vbm/metric.hpp"

namespace vbm::solver {

// A map (x, y) -> R^k. Most operators ignore y.
class Operator {
 public:
  using Fn = std::function<Vec(const Vec& x, const Vec& y)>;

  Operator() = default;
  // One expression per output component in x1..x{x_dim}, y1..y{y_dim}.
  static Operator from_expressions(const std::vector<std::string>& components,
                                   std::size_t x_dim, std::size_t y_dim = 0);
  static Operator from_function(std::size_t x_dim, std::size_t out_dim, Fn fn,
                                std::size_t y_dim = 0);

  std::size_t x_dim() const noexcept { return x_dim_; }
  std::size_t y_dim() const noexcept { return y_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  const std::vector<std::string>& sources() const noexcept { return sources_; }

  // Throws EvalError on domain errors or non-finite output.
  Vec operator()(const Vec& x, const Vec& y = {}) const;

  // x -> N(x, y) with y frozen.
  Operator bind_y(Vec y) const;

 private:
  std::size_t x_dim_ = 0;
  std::size_t y_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::vector<std::string> sources_;
  Fn fn_;
};

struct ContractionProblem {
  Operator N;
  metric::MetricSpec metric;
  Matrix A;
  Vec x0;
  // Componentwise stopping target on the error bound (or residual).
  Vec tol;
  std::size_t max_iter = 10000;
  // Slack for orbit and hypothesis checks.
  double check_tol = kDefaultTol;
};

enum class BoundCase { a, b };
std::string to_string(BoundCase c);

inline constexpr double kDivergenceGuard = 1e12;

struct CertificateRow {
  std::size_t k = 0;
  Vec bound;     // a-priori bound on d(x_k, x*); empty without certification
  Vec residual;  // d(x_k, x_{k+1})
};

struct Certificate {
  // Case whose bound drives stopping; nullopt when no bound is certified.
  std::optional<BoundCase> bound_case;
  bool bound_valid = false;
  bool case_a_valid = false;
  bool case_b_valid = false;
  Vec d01;
  std::optional<Matrix> phi_a;  // (B^-1 - A)^-1
  std::optional<Matrix> phi_b;  // (I - BA)^-1 B
  std::vector<CertificateRow> rows;
  std::string note;

  const Matrix* phi() const;
};

enum class SolveStatus {
  converged,
  max_iter_exceeded,
  contraction_violated,
  graph_condition_violated,
  subordination_violated,
  no_fixed_point_found,
};
std::string to_string(SolveStatus s);

// A failed pointwise hypothesis d(...) <= A d(...): lhs exceeds rhs.
struct Witness {
  std::size_t k = 0;  // orbit index, or sample index
  std::vector<Vec> points;
  Vec lhs;
  Vec rhs;
  std::string where;
};

struct FixedPointResult {
  SolveStatus status = SolveStatus::max_iter_exceeded;
  Vec x_star;
  std::size_t iterations = 0;
  std::vector<Vec> orbit_tail;
  Certificate certificate;
  bool empirical_contraction_ok = true;
  std::optional<Witness> witness;
  Vec final_residual;  // d(x_star, N(x_star))
  // Perov and Maia give uniqueness; the graph variant does not.
  bool unique = true;
  std::string stopping_metric = "d";
  // Maia only: residual and bound transported to d1 via C.
  std::optional<Vec> d1_residual;
  std::optional<Vec> d1_bound;
  std::string message;

  bool ok() const noexcept { return status == SolveStatus::converged; }
};

inline constexpr std::size_t kOrbitTail = 5;

// Throws BClassUnsupported when B is neither positive nor inverse-positive,
// NotConvergent when A is not convergent to zero, NotNonnegative when A < 0.
FixedPointResult perov_solve(const ContractionProblem& p);

// (B^-1 - A)^-1 A^k d01 (case a) or (I - BA)^-1 B A^k d01 (case b).
// Throws CertificationFailed if the case's matrix hypotheses do not hold.
Vec apriori_bound(const Matrix& A, const Matrix& B, const Vec& d01,
                  unsigned long long k, BoundCase c, double tol = kDefaultTol);

// Matrix Phi of the chosen case, or nullopt if not certified.
std::optional<Matrix> certify(const Matrix& A, const Matrix& B, BoundCase c,
                              double tol = kDefaultTol);

// Iteration under d(N x, N^2 x) <= A d(x, N x), checked on `sample` and
// along the orbit. Stops on the residual; no uniqueness claim.
FixedPointResult graph_solve(const ContractionProblem& p,
                             const std::vector<Vec>& sample = {});

struct MaiaProblem {
  Operator N;
  metric::MetricSpec d1;
  metric::MetricSpec d2;
  Matrix C;  // d1 <= C d2
  Matrix A;  // contraction in d2
  Vec x0;
  Vec tol;
  std::size_t max_iter = 10000;
  double check_tol = kDefaultTol;
};

// Subordination d1 <= C d2 is checked on `sample` and along the orbit;
// iteration and stopping run in d2.
FixedPointResult maia_solve(const MaiaProblem& p,
                            const std::vector<Vec>& sample = {});

struct RzRow {
  std::size_t k = 0;
  Vec x;
  Vec residual;  // d(x_k, N(x_k))
  Vec bound;     // Phi residual
  Vec error;     // d(x_k, x*)
  bool holds = true;
};

struct RzReport {
  BoundCase bound_case = BoundCase::a;
  Matrix phi;
  Vec x_star;
  std::vector<RzRow> rows;
  bool bound_holds = true;
  bool residual_vanishes = false;
  bool converges = false;
  std::string note;
};

// Componentwise target used when computing x* for stability checks.
inline constexpr double kReferenceTol = 1e-13;

// Checks d(x_k, x*) <= Phi d(x_k, N(x_k)) along `seq`; an empty `seq` means
// the Picard orbit from p.x0 (p.max_iter steps or until the residual is 0).
// Throws CertificationFailed if neither case applies.
RzReport rz_stability_check(const ContractionProblem& p,
                            const std::vector<Vec>& seq = {});

// Perturbations e_k added in point space: x_{k+1} = N(x_k) + e_k.
struct Schedule {
  std::string description;
  std::function<Vec(std::size_t k)> offset;
  // Whether e_k -> 0 as k -> infinity.
  bool vanishing = true;

  static Schedule zero(std::size_t m);
  static Schedule geometric(std::size_t m, double c, double ratio);
  static Schedule constant(std::size_t m, double c);
  // Explicit offsets, zero after the list ends.
  static Schedule list(std::vector<Vec> offsets);
};

struct OstrowskiRow {
  std::size_t k = 0;
  Vec x;
  Vec delta;     // d(x_{k+1}, N(x_k)) measured
  Vec error;     // d(x_k, x*)
  Vec majorant;  // bound on d(x_k, x*)
  bool holds = true;
};

struct OstrowskiReport {
  BoundCase bound_case = BoundCase::a;
  double b_tilde = 1.0;
  Vec x_star;
  std::vector<OstrowskiRow> rows;
  bool majorant_holds = true;
  bool schedule_vanishing = true;
  bool converges = false;
  // (I - G)^-1 H delta_last: where the error settles for a constant schedule.
  Vec stagnation_bound;
  std::string schedule;
  std::string note;
};

// Majorant m_0 = d(x0, x*), m_{k+1} = H delta_k + G m_k with
// G = bA, H = bI (case a, b = max_i B_ii) or G = BA, H = B (case b).
// Runs p.max_iter steps. Throws CertificationFailed if neither case applies.
OstrowskiReport ostrowski_run(const ContractionProblem& p,
                              const Schedule& schedule);

struct AvramescuProblem {
  Operator N1;  // (x, y) -> x
  Operator N2;  // (x, y) -> y
  metric::MetricSpec metric;  // on x
  Matrix A;
  Vec x0;
  std::vector<std::pair<double, double>> dbox;  // bounds per y component
  Vec inner_tol;  // componentwise bound target for S(y)
  std::size_t max_iter = 10000;
  std::size_t grid = 21;
  std::size_t refine_iters = 500;
  double lambda = 0.5;
  double outer_tol = 1e-10;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  // Half-width of the box around x0 for spot checks of the contraction in x.
  double x_radius = 10.0;
  double check_tol = kDefaultTol;
};

struct ContinuitySample {
  Vec y;
  Vec ybar;
  Vec lhs;  // d(S(y), S(ybar))
  Vec rhs;  // Phi d(N1(S(ybar), y), N1(S(ybar), ybar))
  bool holds = true;
};

struct ContinuityReport {
  BoundCase bound_case = BoundCase::a;
  Matrix phi;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<ContinuitySample> shown;  // failures first, capped
};

struct AvramescuResult {
  SolveStatus status = SolveStatus::no_fixed_point_found;
  Vec x_star;
  Vec y_star;
  double residual_x = 0.0;  // ||N1(x*, y*) - x*||_inf
  double residual_y = 0.0;  // ||N2(x*, y*) - y*||_inf
  std::size_t grid_points = 0;
  std::size_t refine_steps = 0;
  std::optional<Witness> witness;
  ContinuityReport continuity;
  std::string message;

  bool ok() const noexcept { return status == SolveStatus::converged; }
};

// Grid search over the y box followed by damped iteration
// y <- (1 - lambda) y + lambda N2(S(y), y), where S(y) is the fixed point of
// N1(., y). Throws DimensionUnsupported unless 1 <= dim(y) <= 2.
AvramescuResult avramescu_solve(const AvramescuProblem& p);

// S(y) by perov_solve on N1(., y).
FixedPointResult avramescu_inner(const AvramescuProblem& p, const Vec& y);

}  // namespace vbm::solver
