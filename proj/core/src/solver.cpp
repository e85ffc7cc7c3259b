#include "vbm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <tuple>
#include <random>
#include <sstream>

#include "vbm/error.hpp"
#include "vbm/matops.hpp"

namespace vbm::solver {

using metric::eval_metric;
using metric::MetricSpec;
using metric::within;

std::string to_string(BoundCase c) { return c == BoundCase::a ? "a" : "b"; }

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter_exceeded: return "max_iter_exceeded";
    case SolveStatus::contraction_violated: return "contraction_violated";
    case SolveStatus::graph_condition_violated: return "graph_condition_violated";
    case SolveStatus::subordination_violated: return "subordination_violated";
    case SolveStatus::no_fixed_point_found: return "no_fixed_point_found";
  }
  return "?";
}

const Matrix* Certificate::phi() const {
  if (!bound_case) return nullptr;
  return *bound_case == BoundCase::a ? &*phi_a : &*phi_b;
}

// ---------------------------------------------------------------------------
// Operator

Operator Operator::from_expressions(const std::vector<std::string>& components,
                                    std::size_t x_dim, std::size_t y_dim) {
  if (components.empty() || components.size() > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "operator needs 1 to 8 components");
  }
  std::vector<expr::Expr> parsed;
  for (const auto& c : components) {
    expr::Expr e = expr::parse(c);
    if (expr::arity(e, expr::VarKind::u) || expr::arity(e, expr::VarKind::v)) {
      throw Error(ErrorCode::UnboundVariable,
                  "operator component '" + c + "' may only use x and y variables");
    }
    if (expr::arity(e, expr::VarKind::x) > x_dim) {
      throw Error(ErrorCode::UnboundVariable, "operator component '" + c +
                                                    "' uses x beyond dimension " +
                                                    std::to_string(x_dim));
    }
    if (expr::arity(e, expr::VarKind::y) > y_dim) {
      throw Error(ErrorCode::UnboundVariable, "operator component '" + c +
                                                    "' uses y beyond dimension " +
                                                    std::to_string(y_dim));
    }
    parsed.push_back(std::move(e));
  }
  Operator op;
  op.x_dim_ = x_dim;
  op.y_dim_ = y_dim;
  op.out_dim_ = components.size();
  op.sources_ = components;
  op.fn_ = [parsed, components](const Vec& x, const Vec& y) {
    const expr::Bindings env{x.span(), y.span(), {}, {}};
    Vec out(parsed.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      try {
        out[i] = expr::eval(parsed[i], env);
      } catch (const Error& e) {
        throw Error(ErrorCode::EvalError,
                    "operator component " + std::to_string(i + 1) + " (" + components[i] +
                        "): " + e.what());
      }
    }
    return out;
  };
  return op;
}

Operator Operator::from_function(std::size_t x_dim, std::size_t out_dim, Fn fn,
                                 std::size_t y_dim) {
  Operator op;
  op.x_dim_ = x_dim;
  op.y_dim_ = y_dim;
  op.out_dim_ = out_dim;
  op.fn_ = std::move(fn);
  return op;
}

Vec Operator::operator()(const Vec& x, const Vec& y) const {
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "empty operator");
  if (x.size() != x_dim_ || y.size() != y_dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator expects x of dimension " + std::to_string(x_dim_) +
                    " and y of dimension " + std::to_string(y_dim_));
  }
  Vec out = fn_(x, y);
  if (out.size() != out_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "operator returned the wrong dimension");
  }
  if (!out.all_finite()) throw Error(ErrorCode::EvalError, "operator value is not finite");
  return out;
}

Operator Operator::bind_y(Vec y) const {
  Operator self = *this;
  Operator op = from_function(
      x_dim_, out_dim_, [self, y](const Vec& x, const Vec&) { return self(x, y); });
  op.sources_ = sources_;
  return op;
}

// ---------------------------------------------------------------------------
// Certification

std::optional<Matrix> certify(const Matrix& A, const Matrix& B, BoundCase c, double tol) {
  if (A.dim() != B.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "A and B must have the same size");
  }
  const std::size_t n = A.dim();
  if (c == BoundCase::a) {
    const auto binv = matops::is_inverse_positive(B, tol);
    if (!binv.inverse_positive) return std::nullopt;
    const auto aux = matops::is_inverse_positive(*binv.inverse - A, tol);
    if (!aux.inverse_positive) return std::nullopt;
    return *aux.inverse;
  }
  if (!matops::is_positive(B, tol)) return std::nullopt;
  const auto aux = matops::is_inverse_positive(Matrix::identity(n) - B * A, tol);
  if (!aux.inverse_positive) return std::nullopt;
  return *aux.inverse * B;
}

Vec apriori_bound(const Matrix& A, const Matrix& B, const Vec& d01, unsigned long long k,
                  BoundCase c, double tol) {
  if (d01.size() != A.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "d01 must match the size of A");
  }
  const auto phi = certify(A, B, c, tol);
  if (!phi) {
    throw Error(ErrorCode::CertificationFailed,
                c == BoundCase::a
                    ? "case a needs B and B^-1 - A inverse-positive"
                    : "case b needs B positive and I - BA inverse-positive");
  }
  return *phi * (A.pow(k) * d01);
}

namespace {

void validate_contraction(const Matrix& A, const MetricSpec& ms, double tol) {
  if (A.dim() != ms.n) {
    throw Error(ErrorCode::DimensionMismatch,
                "A is " + std::to_string(A.dim()) + "x" + std::to_string(A.dim()) +
                    " but the metric has " + std::to_string(ms.n) + " components");
  }
  if (!A.all_finite()) throw Error(ErrorCode::NonFinite, "A has non-finite entries");
  const auto verdict = matops::is_convergent_to_zero(A, tol);
  if (!verdict.convergent) {
    throw Error(ErrorCode::NotConvergent,
                "A is not convergent to zero (spectral radius " +
                    std::to_string(verdict.spectral_radius) + ")");
  }
}

void validate_point(const Vec& x, std::size_t m, const char* what) {
  if (x.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " +
                                                  std::to_string(x.size()) + ", expected " +
                                                  std::to_string(m));
  }
  if (!x.all_finite()) throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
}

void validate_problem(const ContractionProblem& p) {
  validate_contraction(p.A, p.metric, p.check_tol);
  if (p.N.x_dim() != p.metric.m || p.N.out_dim() != p.metric.m || p.N.y_dim() != 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must map R^m to R^m with m = " +
                                                  std::to_string(p.metric.m));
  }
  validate_point(p.x0, p.metric.m, "x0");
  if (p.tol.size() != p.metric.n) {
    throw Error(ErrorCode::DimensionMismatch, "tol must have one entry per metric component");
  }
}

void require_b_class(const MetricSpec& ms) {
  if (ms.b_class == matops::BClass::neither) {
    throw Error(ErrorCode::BClassUnsupported,
                "B is neither positive nor inverse-positive; no solver applies");
  }
}

Certificate prepare_certificate(const Matrix& A, const Matrix& B, double tol) {
  Certificate c;
  c.phi_a = certify(A, B, BoundCase::a, tol);
  c.phi_b = certify(A, B, BoundCase::b, tol);
  c.case_a_valid = c.phi_a.has_value();
  c.case_b_valid = c.phi_b.has_value();
  c.bound_valid = c.case_a_valid || c.case_b_valid;
  if (!c.bound_valid) {
    c.note = "neither B^-1 - A nor I - BA is inverse-positive; stopping on the residual";
  }
  return c;
}

void choose_case(Certificate& c, const Matrix& A) {
  if (c.case_a_valid && c.case_b_valid) {
    const Vec ad = A * c.d01;
    const Vec ba = *c.phi_a * ad;
    const Vec bb = *c.phi_b * ad;
    c.bound_case = (leq(bb, ba) && !(bb == ba)) ? BoundCase::b : BoundCase::a;
  } else if (c.case_a_valid) {
    c.bound_case = BoundCase::a;
  } else if (c.case_b_valid) {
    c.bound_case = BoundCase::b;
  }
}

struct IterationSetup {
  const Operator& N;
  const MetricSpec& ms;
  const Matrix& A;
  const Vec& x0;
  const Vec& tol;
  std::size_t max_iter;
  double check_tol;
  SolveStatus violation_status;
  const char* condition;
};

// x_{k+1} = N(x_k) with the orbit check d(x_k, x_{k+1}) <= A d(x_{k-1}, x_k).
FixedPointResult iterate(const IterationSetup& s, Certificate cert) {
  FixedPointResult r;
  Vec x = s.x0;
  Vec nx = s.N(x);
  cert.d01 = eval_metric(s.ms, x, nx);
  choose_case(cert, s.A);
  r.certificate = std::move(cert);
  const Matrix* phi = r.certificate.phi();

  Vec akd = r.certificate.d01;
  Vec xprev, prev_res;
  std::deque<Vec> tail;
  for (std::size_t k = 0;; ++k) {
    const Vec res = k == 0 ? r.certificate.d01 : eval_metric(s.ms, x, nx);
    CertificateRow row{k, phi ? *phi * akd : Vec{}, res};
    r.certificate.rows.push_back(row);
    tail.push_back(x);
    if (tail.size() > kOrbitTail) tail.pop_front();
    auto finish = [&](SolveStatus st) {
      r.status = st;
      r.x_star = x;
      r.iterations = k;
      r.final_residual = res;
      r.orbit_tail.assign(tail.begin(), tail.end());
      return r;
    };

    if (k > 0) {
      const Vec rhs = s.A * prev_res;
      if (!within(res, rhs, s.check_tol)) {
        r.empirical_contraction_ok = false;
        r.witness = Witness{k - 1, {xprev, x, nx}, res, rhs,
                            std::string(s.condition) + " fails along the orbit"};
        std::ostringstream os;
        os << s.condition << " fails at k=" << k - 1 << ": " << res << " > " << rhs;
        r.message = os.str();
        return finish(s.violation_status);
      }
    }
    if (phi ? leq(row.bound, s.tol) : leq(res, s.tol)) {
      r.message = phi ? "a-priori bound below tol" : "residual below tol";
      return finish(SolveStatus::converged);
    }
    if (k >= s.max_iter) {
      r.message = "max_iter reached";
      return finish(SolveStatus::max_iter_exceeded);
    }
    if (nx.norm_inf() > kDivergenceGuard) {
      r.message = "iterates exceed the divergence guard";
      return finish(SolveStatus::max_iter_exceeded);
    }
    xprev = x;
    prev_res = res;
    x = nx;
    nx = s.N(x);
    akd = s.A * akd;
  }
}

Vec uniform(std::size_t n, double v) { return Vec(n, v); }

Vec reference_fixed_point(const ContractionProblem& p) {
  ContractionProblem q = p;
  q.tol = uniform(p.metric.n, kReferenceTol);
  q.max_iter = std::max<std::size_t>(p.max_iter, 100000);
  FixedPointResult r = perov_solve(q);
  if (r.status == SolveStatus::contraction_violated) {
    throw Error(ErrorCode::ContractionViolated, r.message);
  }
  if (!r.ok()) {
    // Floating point can stall just above the target; accept when the
    // iteration has stopped moving.
    if (!leq(r.final_residual, uniform(p.metric.n, 1e3 * kReferenceTol))) {
      throw Error(ErrorCode::NoFixedPointFound, "reference solve did not converge: " + r.message);
    }
  }
  return r.x_star;
}

std::pair<BoundCase, Matrix> stability_case(const ContractionProblem& p) {
  const auto a = certify(p.A, p.metric.B, BoundCase::a, p.check_tol);
  const auto b = certify(p.A, p.metric.B, BoundCase::b, p.check_tol);
  if (a && b) {
    // Prefer a unless b is entrywise no larger and strictly smaller somewhere.
    bool b_tighter = true;
    for (std::size_t i = 0; i < a->dim(); ++i)
      for (std::size_t j = 0; j < a->dim(); ++j)
        if ((*b)(i, j) > (*a)(i, j)) b_tighter = false;
    if (b_tighter && !(*a == *b)) return {BoundCase::b, *b};
    return {BoundCase::a, *a};
  }
  if (a) return {BoundCase::a, *a};
  if (b) return {BoundCase::b, *b};
  throw Error(ErrorCode::CertificationFailed,
              "need B and B^-1 - A inverse-positive, or B positive and I - BA inverse-positive");
}

bool holds_abs(const Vec& lhs, const Vec& rhs, double tol) {
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!(lhs[i] <= rhs[i] + tol * (1.0 + std::abs(rhs[i])))) return false;
  return true;
}

}  // namespace

FixedPointResult perov_solve(const ContractionProblem& p) {
  validate_problem(p);
  require_b_class(p.metric);
  IterationSetup s{p.N,        p.metric,    p.A,
                   p.x0,       p.tol,       p.max_iter,
                   p.check_tol, SolveStatus::contraction_violated,
                   "d(N x, N y) <= A d(x, y)"};
  return iterate(s, prepare_certificate(p.A, p.metric.B, p.check_tol));
}

FixedPointResult graph_solve(const ContractionProblem& p, const std::vector<Vec>& sample) {
  validate_problem(p);
  const char* cond = "d(N x, N^2 x) <= A d(x, N x)";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Vec& x = sample[i];
    validate_point(x, p.metric.m, "sample point");
    const Vec nx = p.N(x);
    const Vec nnx = p.N(nx);
    const Vec lhs = eval_metric(p.metric, nx, nnx);
    const Vec rhs = p.A * eval_metric(p.metric, x, nx);
    if (!within(lhs, rhs, p.check_tol)) {
      FixedPointResult r;
      r.status = SolveStatus::graph_condition_violated;
      r.unique = false;
      r.x_star = p.x0;
      r.empirical_contraction_ok = false;
      r.witness = Witness{i, {x, nx, nnx}, lhs, rhs, std::string(cond) + " fails on the sample"};
      std::ostringstream os;
      os << cond << " fails at sample point " << i << ": " << lhs << " > " << rhs;
      r.message = os.str();
      return r;
    }
  }
  Certificate cert;
  cert.note = "graph condition gives no global contraction; stopping on the residual";
  IterationSetup s{p.N,        p.metric, p.A,        p.x0, p.tol, p.max_iter, p.check_tol,
                   SolveStatus::graph_condition_violated, cond};
  FixedPointResult r = iterate(s, std::move(cert));
  r.unique = false;
  return r;
}

FixedPointResult maia_solve(const MaiaProblem& p, const std::vector<Vec>& sample) {
  validate_contraction(p.A, p.d2, p.check_tol);
  require_b_class(p.d2);
  if (p.d1.m != p.d2.m || p.d1.n != p.d2.n) {
    throw Error(ErrorCode::DimensionMismatch, "d1 and d2 must share point and value dimensions");
  }
  if (p.C.dim() != p.d1.n || !p.C.all_finite()) {
    throw Error(ErrorCode::DimensionMismatch, "C must be a finite n x n matrix");
  }
  if (p.N.x_dim() != p.d2.m || p.N.out_dim() != p.d2.m || p.N.y_dim() != 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must map R^m to R^m");
  }
  validate_point(p.x0, p.d2.m, "x0");
  if (p.tol.size() != p.d2.n) {
    throw Error(ErrorCode::DimensionMismatch, "tol must have one entry per metric component");
  }

  auto subordination = [&](const Vec& u, const Vec& v, std::size_t k,
                           const char* where) -> std::optional<Witness> {
    const Vec lhs = eval_metric(p.d1, u, v);
    const Vec rhs = p.C * eval_metric(p.d2, u, v);
    if (within(lhs, rhs, p.check_tol)) return std::nullopt;
    return Witness{k, {u, v}, lhs, rhs, where};
  };
  auto violated = [&](Witness w) {
    FixedPointResult r;
    r.status = SolveStatus::subordination_violated;
    r.x_star = p.x0;
    std::ostringstream os;
    os << "d1 <= C d2 fails (" << w.where << "): " << w.lhs << " > " << w.rhs;
    r.message = os.str();
    r.witness = std::move(w);
    r.stopping_metric = "d2";
    return r;
  };

  for (std::size_t i = 0; i < sample.size(); ++i) {
    validate_point(sample[i], p.d2.m, "sample point");
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      if (auto w = subordination(sample[i], sample[j], i, "sample pair")) return violated(*w);
    }
  }

  IterationSetup s{p.N,        p.d2,  p.A,        p.x0, p.tol, p.max_iter, p.check_tol,
                   SolveStatus::contraction_violated, "d2(N x, N y) <= A d2(x, y)"};
  FixedPointResult r = iterate(s, prepare_certificate(p.A, p.d2.B, p.check_tol));
  r.stopping_metric = "d2";
  if (auto w = subordination(p.x0, r.x_star, 0, "pair (x0, x*)")) {
    FixedPointResult v = violated(*w);
    v.certificate = std::move(r.certificate);
    return v;
  }
  const Vec nx = p.N(r.x_star);
  r.d1_residual = eval_metric(p.d1, r.x_star, nx);
  if (!r.certificate.rows.empty() && !r.certificate.rows.back().bound.empty()) {
    r.d1_bound = p.C * r.certificate.rows.back().bound;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Stability

RzReport rz_stability_check(const ContractionProblem& p, const std::vector<Vec>& seq) {
  validate_problem(p);
  require_b_class(p.metric);
  RzReport rep;
  std::tie(rep.bound_case, rep.phi) = stability_case(p);
  rep.x_star = reference_fixed_point(p);

  std::vector<Vec> points = seq;
  if (points.empty()) {
    Vec x = p.x0;
    for (std::size_t k = 0; k <= p.max_iter; ++k) {
      points.push_back(x);
      const Vec nx = p.N(x);
      if (leq(eval_metric(p.metric, x, nx), uniform(p.metric.n, kReferenceTol))) break;
      if (nx.norm_inf() > kDivergenceGuard) break;
      x = nx;
    }
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    validate_point(points[k], p.metric.m, "sequence point");
    RzRow row;
    row.k = k;
    row.x = points[k];
    row.residual = eval_metric(p.metric, points[k], p.N(points[k]));
    row.bound = rep.phi * row.residual;
    row.error = eval_metric(p.metric, points[k], rep.x_star);
    row.holds = holds_abs(row.error, row.bound, p.check_tol);
    rep.bound_holds = rep.bound_holds && row.holds;
    rep.rows.push_back(std::move(row));
  }
  if (!rep.rows.empty()) {
    rep.residual_vanishes = leq(rep.rows.back().residual, p.tol);
    rep.converges = rep.residual_vanishes && rep.rows.back().holds;
  }
  if (!rep.residual_vanishes) {
    rep.note = "residual d(x_k, N(x_k)) does not vanish; the stability hypothesis is unmet";
  }
  return rep;
}

Schedule Schedule::zero(std::size_t m) {
  return {"zero", [m](std::size_t) { return Vec(m); }, true};
}

Schedule Schedule::geometric(std::size_t m, double c, double ratio) {
  if (!(ratio >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ratio must be >= 0");
  std::ostringstream os;
  os << c << " * " << ratio << "^k * e";
  return {os.str(),
          [m, c, ratio](std::size_t k) { return Vec(m, c * std::pow(ratio, double(k))); },
          ratio < 1.0 || c == 0.0};
}

Schedule Schedule::constant(std::size_t m, double c) {
  std::ostringstream os;
  os << c << " * e";
  return {os.str(), [m, c](std::size_t) { return Vec(m, c); }, c == 0.0};
}

Schedule Schedule::list(std::vector<Vec> offsets) {
  const std::size_t m = offsets.empty() ? 0 : offsets.front().size();
  for (const auto& o : offsets) {
    if (o.size() != m) throw Error(ErrorCode::DimensionMismatch, "offsets differ in size");
  }
  std::string desc = std::to_string(offsets.size()) + " explicit offsets";
  return {desc,
          [offs = std::move(offsets), m](std::size_t k) {
            return k < offs.size() ? offs[k] : Vec(m);
          },
          true};
}

OstrowskiReport ostrowski_run(const ContractionProblem& p, const Schedule& schedule) {
  validate_problem(p);
  require_b_class(p.metric);
  const std::size_t n = p.metric.n;
  const Matrix& B = p.metric.B;
  OstrowskiReport rep;
  rep.b_tilde = B.max_diagonal();
  rep.schedule = schedule.description;
  rep.schedule_vanishing = schedule.vanishing;

  Matrix G, H;
  std::optional<Matrix> resolvent;  // (I - G)^-1
  const auto binv = matops::is_inverse_positive(B, p.check_tol);
  if (binv.inverse_positive) {
    G = rep.b_tilde * p.A;
    const auto ip = matops::is_inverse_positive(Matrix::identity(n) - G, p.check_tol);
    if (ip.inverse_positive) {
      rep.bound_case = BoundCase::a;
      H = rep.b_tilde * Matrix::identity(n);
      resolvent = *ip.inverse;
    }
  }
  if (!resolvent && matops::is_positive(B, p.check_tol)) {
    G = B * p.A;
    const auto ip = matops::is_inverse_positive(Matrix::identity(n) - G, p.check_tol);
    if (ip.inverse_positive) {
      rep.bound_case = BoundCase::b;
      H = B;
      resolvent = *ip.inverse;
    }
  }
  if (!resolvent) {
    throw Error(ErrorCode::CertificationFailed,
                "need B and I - bA inverse-positive (b = max B_ii), or B positive and "
                "I - BA inverse-positive");
  }

  rep.x_star = reference_fixed_point(p);
  Vec x = p.x0;
  Vec maj = eval_metric(p.metric, x, rep.x_star);
  for (std::size_t k = 0; k <= p.max_iter; ++k) {
    OstrowskiRow row;
    row.k = k;
    row.x = x;
    row.error = eval_metric(p.metric, x, rep.x_star);
    row.majorant = maj;
    row.holds = holds_abs(row.error, row.majorant, p.check_tol);
    rep.majorant_holds = rep.majorant_holds && row.holds;

    const Vec nx = p.N(x);
    const Vec offset = schedule.offset(k);
    if (offset.size() != p.metric.m) {
      throw Error(ErrorCode::DimensionMismatch, "perturbation must live in R^m");
    }
    const Vec next = nx + offset;
    row.delta = eval_metric(p.metric, next, nx);
    maj = H * row.delta + G * maj;
    rep.rows.push_back(std::move(row));
    if (next.norm_inf() > kDivergenceGuard) break;
    x = next;
  }
  const OstrowskiRow& last = rep.rows.back();
  rep.converges = leq(last.error, p.tol);
  rep.stagnation_bound = *resolvent * (H * last.delta);
  if (!rep.schedule_vanishing) {
    rep.note = "perturbations do not vanish; convergence is not expected";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Coupled systems

namespace {

void validate_avramescu(const AvramescuProblem& p) {
  const std::size_t q = p.dbox.size();
  if (q == 0 || q > 2) {
    throw Error(ErrorCode::DimensionUnsupported,
                "grid search supports dim(y) in {1, 2}, got " + std::to_string(q));
  }
  for (const auto& [lo, hi] : p.dbox) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error(ErrorCode::InvalidInput, "y box needs finite bounds lo <= hi");
    }
  }
  const std::size_t m = p.metric.m;
  if (p.N1.x_dim() != m || p.N1.y_dim() != q || p.N1.out_dim() != m) {
    throw Error(ErrorCode::DimensionMismatch, "N1 must map R^m x R^q to R^m");
  }
  if (p.N2.x_dim() != m || p.N2.y_dim() != q || p.N2.out_dim() != q) {
    throw Error(ErrorCode::DimensionMismatch, "N2 must map R^m x R^q to R^q");
  }
  if (p.grid < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  if (!(p.lambda > 0.0 && p.lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be in (0, 1]");
  }
}

ContractionProblem inner_problem(const AvramescuProblem& p, const Vec& y) {
  ContractionProblem c;
  c.N = p.N1.bind_y(y);
  c.metric = p.metric;
  c.A = p.A;
  c.x0 = p.x0;
  c.tol = p.inner_tol;
  c.max_iter = p.max_iter;
  c.check_tol = p.check_tol;
  return c;
}

Vec clamp_box(Vec y, const std::vector<std::pair<double, double>>& box) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], box[i].first, box[i].second);
  return y;
}

double inf_dist(const Vec& a, const Vec& b) { return (a - b).norm_inf(); }

}  // namespace

FixedPointResult avramescu_inner(const AvramescuProblem& p, const Vec& y) {
  return perov_solve(inner_problem(p, y));
}

AvramescuResult avramescu_solve(const AvramescuProblem& p) {
  validate_avramescu(p);
  const std::size_t q = p.dbox.size();
  const std::size_t m = p.metric.m;
  AvramescuResult res;

  const ContractionProblem probe = inner_problem(p, Vec(q));
  validate_problem(probe);
  require_b_class(p.metric);
  std::tie(res.continuity.bound_case, res.continuity.phi) = stability_case(probe);

  std::mt19937_64 rng(p.seed);
  auto draw_y = [&] {
    Vec y(q);
    for (std::size_t i = 0; i < q; ++i)
      y[i] = std::uniform_real_distribution<double>(p.dbox[i].first, p.dbox[i].second)(rng);
    return y;
  };
  auto draw_x = [&] {
    Vec x(m);
    for (std::size_t i = 0; i < m; ++i)
      x[i] = std::uniform_real_distribution<double>(p.x0[i] - p.x_radius,
                                                    p.x0[i] + p.x_radius)(rng);
    return x;
  };

  // Spot check of the contraction in x, uniform in y.
  for (std::size_t s = 0; s < p.samples; ++s) {
    const Vec x = draw_x(), xb = draw_x(), y = draw_y();
    const Vec lhs = eval_metric(p.metric, p.N1(x, y), p.N1(xb, y));
    const Vec rhs = p.A * eval_metric(p.metric, x, xb);
    if (!within(lhs, rhs, p.check_tol)) {
      res.status = SolveStatus::contraction_violated;
      res.witness = Witness{s, {x, xb, y}, lhs, rhs, "d(N1(x,y), N1(xb,y)) <= A d(x, xb)"};
      std::ostringstream os;
      os << "contraction in x fails at sample " << s << ": " << lhs << " > " << rhs;
      res.message = os.str();
      return res;
    }
  }

  auto solve_s = [&](const Vec& y) -> std::optional<Vec> {
    FixedPointResult r = avramescu_inner(p, y);
    if (r.status == SolveStatus::contraction_violated) {
      res.status = r.status;
      res.witness = r.witness;
      res.message = "inner solve: " + r.message;
      return std::nullopt;
    }
    return r.x_star;
  };

  // Grid search on ||g(y) - y||_inf with g(y) = N2(S(y), y).
  std::vector<Vec> grid;
  const std::size_t g = p.grid;
  auto coord = [&](std::size_t i, std::size_t t) {
    const auto [lo, hi] = p.dbox[i];
    return t + 1 == g ? hi : lo + (hi - lo) * double(t) / double(g - 1);
  };
  if (q == 1) {
    for (std::size_t t = 0; t < g; ++t) grid.push_back(Vec{coord(0, t)});
  } else {
    for (std::size_t t = 0; t < g; ++t)
      for (std::size_t u = 0; u < g; ++u) grid.push_back(Vec{coord(0, t), coord(1, u)});
  }
  res.grid_points = grid.size();
  double best = std::numeric_limits<double>::infinity();
  Vec y;
  for (const Vec& cand : grid) {
    auto s = solve_s(cand);
    if (!s) return res;
    const double r = inf_dist(p.N2(*s, cand), cand);
    if (r < best) {
      best = r;
      y = cand;
    }
  }

  // Damped refinement.
  Vec x;
  for (std::size_t it = 0;; ++it) {
    auto s = solve_s(y);
    if (!s) return res;
    x = *s;
    const Vec gy = p.N2(x, y);
    best = inf_dist(gy, y);
    res.refine_steps = it;
    if (best <= p.outer_tol || it >= p.refine_iters) break;
    y = clamp_box((1.0 - p.lambda) * y + p.lambda * gy, p.dbox);
  }
  res.x_star = x;
  res.y_star = y;
  res.residual_x = inf_dist(p.N1(x, y), x);
  res.residual_y = inf_dist(p.N2(x, y), y);
  if (best <= p.outer_tol) {
    res.status = SolveStatus::converged;
    res.message = "refinement reached outer_tol";
  } else {
    res.status = SolveStatus::no_fixed_point_found;
    std::ostringstream os;
    os << "refinement stalled at ||g(y) - y|| = " << best;
    res.message = os.str();
  }

  // Continuity of S on sampled pairs.
  ContinuityReport& cont = res.continuity;
  std::vector<ContinuitySample> failures, passes;
  for (std::size_t s = 0; s < p.samples; ++s) {
    const Vec ya = draw_y(), yb = draw_y();
    auto sa = solve_s(ya);
    auto sb = solve_s(yb);
    if (!sa || !sb) return res;
    ContinuitySample cs;
    cs.y = ya;
    cs.ybar = yb;
    cs.lhs = eval_metric(p.metric, *sa, *sb);
    cs.rhs = cont.phi * eval_metric(p.metric, p.N1(*sb, ya), p.N1(*sb, yb));
    cs.holds = holds_abs(cs.lhs, cs.rhs, p.check_tol);
    ++cont.checked;
    if (!cs.holds) {
      ++cont.failures;
      if (failures.size() < 10) failures.push_back(std::move(cs));
    } else if (passes.size() < 3) {
      passes.push_back(std::move(cs));
    }
  }
  cont.shown = std::move(failures);
  for (auto& s : passes)
    if (cont.shown.size() < 10) cont.shown.push_back(std::move(s));
  return res;
}

}  // namespace vbm::solver
