#pragma once

// Ekeland variational principle and Caristi fixed points on finite vector
// B-metric spaces, where every hypothesis and conclusion can be checked
// exhaustively.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vbm/linalg.hpp"
#include "vbm/metric.hpp"

namespace vbm::evp {

// Slack on membership and triangle comparisons: a <= b + kSlack (1 + |b|).
inline constexpr double kSlack = 1e-12;
inline constexpr std::size_t kMaxPoints = 10000;

using IndexSet = std::vector<std::size_t>;

class FiniteSpace {
 public:
  // dist[i][j] in R^n. Checks zero diagonal, positivity, symmetry,
  // d(i,j) != 0 for i != j and the triangle inequality on all triples;
  // throws HypothesisError (HypothesisViolated) with the offending indices.
  FiniteSpace(std::vector<std::string> labels,
              std::vector<std::vector<Vec>> dist, Matrix B);

  static FiniteSpace from_metric(const metric::MetricSpec& spec,
                                 const std::vector<Vec>& points,
                                 std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t n() const noexcept { return B_.dim(); }
  const Vec& d(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
  const Matrix& B() const noexcept { return B_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Vec>& coords() const noexcept { return coords_; }

  // Smallest positive rho_1 distance (infinity for fewer than two points).
  double gap() const noexcept { return gap_; }

  // Same points and B with every distance multiplied by c > 0.
  FiniteSpace scaled(double c) const;

 private:
  FiniteSpace() = default;
  void validate();

  std::vector<std::string> labels_;
  std::vector<Vec> dist_;  // row-major size x size
  Matrix B_;
  std::vector<Vec> coords_;
  double gap_ = 0.0;
};

// a <= b + kSlack (1 + |b|) componentwise.
bool leq_slack(const Vec& a, const Vec& b);

// eps_k = eps0 * ratio^k for k >= 1.
struct EpsSchedule {
  double eps0 = 1.0;
  double ratio = 0.5;
  double operator()(std::size_t k) const;
};

// The unique common element of a descending family of index sets. Throws
// EmptySet, NotDescending, or HypothesisError (HypothesisViolated) when the
// last set still holds two points at positive distance.
std::size_t cantor_intersect(const FiniteSpace& space,
                             const std::vector<IndexSet>& sets);

// Smallest p in F with f(p) <= f(x) + eps e for every x in F.
std::optional<std::size_t> find_H_point(const FiniteSpace& space,
                                        const std::vector<Vec>& f,
                                        const IndexSet& F, double eps);

// A strict inequality lhs < rhs in component i witnessed at step k.
struct StrictWitness {
  std::size_t x = 0;
  std::size_t k = 0;
  std::size_t i = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Conclusions {
  bool c1 = false;  // f(x*) <= f(x0) - d(x*, x0)
  Vec c1_lhs;
  Vec c1_rhs;
  // For every x != x*: some (k, i) with
  // f_i(x*) + d_i(x*, x_k) < f_i(x) + d_i(x, x_k).
  bool c2 = false;
  std::vector<StrictWitness> c2_witnesses;
  // For every x != x*: some (k, i) with
  // f_i(x*) < f_i(x) + (B d(x*, x))_i + ((B - I) d(x*, x_k))_i.
  bool c3 = false;
  std::vector<StrictWitness> c3_witnesses;
  bool nested = false;     // F_{k+1} in F_k, x_k in F_{k-1}, x* in all F_k
  bool shrinking = false;  // d(y, x_k) <= eps_k e for y in F_k, k >= 1
  std::vector<std::string> failures;

  bool ok() const noexcept { return c1 && c2 && c3 && nested && shrinking; }
};

struct EkelandTrace {
  std::size_t x0 = 0;
  std::vector<double> eps;      // eps[k] picked x_k; eps[0] = 0
  std::vector<std::size_t> x;   // x_0 .. x_K
  std::vector<IndexSet> F;      // F(x_0) .. F(x_K)
  std::size_t x_star = 0;
  double metric_scale = 1.0;
  Conclusions conclusions;
};

// Runs the construction F(x_k) = {x in F(x_{k-1}) : f(x) + d(x, x_k) <= f(x_k)}
// until F(x_k) is a singleton, then verifies the conclusions. Throws
// HypothesisError (ConditionHFailed) when no (H)-point exists at a step,
// Error(ConclusionViolated) if the verification fails.
EkelandTrace ekeland_weak(const FiniteSpace& space, const std::vector<Vec>& f,
                          std::size_t x0, const EpsSchedule& schedule = {});

// Exhaustive check of every conclusion for a finished trace.
Conclusions verify_conclusions(const EkelandTrace& trace,
                               const FiniteSpace& space,
                               const std::vector<Vec>& f);

struct StrongResult {
  EkelandTrace trace;  // run on (eps/delta) d
  double eps = 0.0;
  double delta = 0.0;
  bool s1 = false;  // f(x*) <= f(x0)
  bool s2 = false;  // d(x*, x0) <= delta e
  Vec d_star_x0;

  bool ok() const noexcept { return s1 && s2 && trace.conclusions.ok(); }
};

// Requires f(x0) <= f(x) + eps e for all x (HypothesisError
// PreconditionCiFailed otherwise).
StrongResult ekeland_strong(const FiniteSpace& space, const std::vector<Vec>& f,
                            std::size_t x0, double eps, double delta,
                            const EpsSchedule& schedule = {});

struct CaristiResult {
  std::size_t x_star = 0;
  EkelandTrace trace;
  IndexSet fixed_points;  // brute-force scan of N
};

// Checks d(N x, y) <= d(x, y) + B d(N x, x) for all pairs and
// B d(N x, x) <= f(x) - f(N x) for all x (HypothesisError Cc1Violated /
// Cc2Violated), then runs ekeland_weak from x0.
CaristiResult caristi_solve(const FiniteSpace& space, const std::vector<Vec>& f,
                            const IndexSet& N, std::size_t x0 = 0,
                            const EpsSchedule& schedule = {});

}  // namespace vbm::evp
