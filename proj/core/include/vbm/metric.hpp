#pragma once

// Vector B-metrics on R^m: d(u,v) in R^n_+ with
// d(u,w) <= B (d(u,v) + d(v,w)) componentwise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vbm/expr.hpp"
#include "vbm/linalg.hpp"
#include "vbm/matops.hpp"

namespace vbm::metric {

enum class MetricKind { example1, example2, componentwise_abs, expression };

std::string to_string(MetricKind k);
std::optional<MetricKind> parse_kind(const std::string& s);

struct MetricSpec {
  std::size_t n = 0;  // distance dimension
  std::size_t m = 0;  // point dimension
  MetricKind kind = MetricKind::componentwise_abs;
  std::vector<std::string> sources;  // expression kind only
  std::vector<expr::Expr> components;
  Matrix B;
  matops::BClass b_class = matops::BClass::neither;
  // Positive factor applied to every component; c*d keeps the same B.
  double scale = 1.0;
};

// d(x,y) = (|x1-y1|^2 + |x2-y2|, |x2-y2|), B = [[2,-1],[0,1]].
MetricSpec example1();
// (|x-y|^2, |x-y|) on S = {(t,t)}, (|x-y|, |x-y|^2) otherwise, l1 norm,
// B0 = [[2,2],[1,1]].
MetricSpec example2();
// d_i = |u_i - v_i|, n = m.
MetricSpec componentwise_abs(std::size_t m, Matrix B);
// One expression per component in u1..um, v1..vm.
MetricSpec from_expressions(const std::vector<std::string>& components,
                            std::size_t m, Matrix B);
// Same metric with a different B (class recomputed).
MetricSpec with_matrix(MetricSpec spec, Matrix B);
MetricSpec scaled(MetricSpec spec, double c);

bool example2_in_s(const Vec& p);

// Throws DimensionMismatch or EvalError.
Vec eval_metric(const MetricSpec& spec, const Vec& u, const Vec& v);

enum class Axiom { positivity, identity, symmetry, triangle, evaluation };
std::string to_string(Axiom a);

struct Violation {
  Axiom axiom = Axiom::triangle;
  // Sample indices (u, v[, w]) or empty when points are given directly.
  std::vector<std::size_t> indices;
  std::vector<Vec> points;
  Vec lhs;
  Vec rhs;
  // Largest componentwise excess lhs - rhs (positive for a violation).
  double margin = 0.0;
  std::string note;
};

struct AxiomCounts {
  std::size_t positivity = 0;
  std::size_t identity = 0;
  std::size_t symmetry = 0;
  std::size_t triangle = 0;
};

inline constexpr std::size_t kMaxTriples = 1000000;
inline constexpr std::size_t kMaxReportedViolations = 100;

struct ViolationReport {
  AxiomCounts checked;
  std::size_t violation_count = 0;
  // First kMaxReportedViolations, sorted by witness indices.
  std::vector<Violation> violations;
  std::size_t sample_size = 0;
  bool subsampled = false;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  std::string sampler;

  bool ok() const noexcept { return violation_count == 0; }
};

// a <= b up to tol relative to the magnitudes involved.
bool within(const Vec& lhs, const Vec& rhs, double tol);

// Checks all four axioms on the sample; all ordered triples when there are at
// most kMaxTriples of them, otherwise kMaxTriples seeded random triples.
ViolationReport verify_axioms(const MetricSpec& spec,
                              const std::vector<Vec>& points,
                              double tol = kDefaultTol,
                              std::uint64_t seed = 0);

// `count` independent triples drawn uniformly from [lo,hi]^m, each checked
// for the triangle inequality in both orders plus pairwise axioms.
ViolationReport verify_random_triples(const MetricSpec& spec, std::size_t count,
                                      double lo, double hi, std::uint64_t seed,
                                      double tol = kDefaultTol);

std::vector<Vec> sample_box(std::size_t m, std::size_t count, double lo,
                            double hi, std::uint64_t seed);

enum class Norm { l1, linf, l2 };
std::string to_string(Norm n);
std::optional<Norm> parse_norm(const std::string& s);

// Scalar b-metric constant for rho_1 / rho_inf / rho_2. Requires B >= -tol.
double induced_constant(const Matrix& B, Norm norm, double tol = kDefaultTol);
double rho(const Vec& d, Norm norm);
double induced_rho(const MetricSpec& spec, Norm norm, const Vec& u,
                   const Vec& v);

// max rho_1(d(x,y)) over pairs; 0 for fewer than two points.
double diameter(const MetricSpec& spec, const std::vector<Vec>& points);

// Triangle checks for Example 2's metric against `candidate` on
// x=(t,t), y=(0,0) with z=(alpha,0) (outside S) and z=(alpha,alpha) (in S).
ViolationReport example2_minimality_probe(const Matrix& candidate, double t,
                                          double alpha,
                                          double tol = kDefaultTol);

}  // namespace vbm::metric
