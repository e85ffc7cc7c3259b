#include "vbm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <tuple>

#include "vbm/error.hpp"

namespace vbm::metric {

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::example1: return "example1";
    case MetricKind::example2: return "example2";
    case MetricKind::componentwise_abs: return "componentwise_abs";
    case MetricKind::expression: return "expression";
  }
  return "?";
}

std::optional<MetricKind> parse_kind(const std::string& s) {
  for (auto k : {MetricKind::example1, MetricKind::example2,
                 MetricKind::componentwise_abs, MetricKind::expression})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::positivity: return "positivity";
    case Axiom::identity: return "identity";
    case Axiom::symmetry: return "symmetry";
    case Axiom::triangle: return "triangle";
    case Axiom::evaluation: return "evaluation";
  }
  return "?";
}

std::string to_string(Norm n) {
  switch (n) {
    case Norm::l1: return "l1";
    case Norm::linf: return "linf";
    case Norm::l2: return "l2";
  }
  return "?";
}

std::optional<Norm> parse_norm(const std::string& s) {
  for (auto n : {Norm::l1, Norm::linf, Norm::l2})
    if (to_string(n) == s) return n;
  return std::nullopt;
}

namespace {

void check_matrix(const Matrix& B, std::size_t n) {
  if (B.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "B is " + std::to_string(B.dim()) + "x" + std::to_string(B.dim()) +
                    " but the metric has " + std::to_string(n) + " components");
  }
  if (!B.all_finite()) throw Error(ErrorCode::NonFinite, "B has non-finite entries");
}

double l1(double a, double b) { return std::abs(a) + std::abs(b); }

}  // namespace

MetricSpec example1() {
  MetricSpec s;
  s.n = 2;
  s.m = 2;
  s.kind = MetricKind::example1;
  s.B = Matrix{{2, -1}, {0, 1}};
  s.b_class = matops::b_class(s.B);
  return s;
}

MetricSpec example2() {
  MetricSpec s;
  s.n = 2;
  s.m = 2;
  s.kind = MetricKind::example2;
  s.B = Matrix{{2, 2}, {1, 1}};
  s.b_class = matops::b_class(s.B);
  return s;
}

MetricSpec componentwise_abs(std::size_t m, Matrix B) {
  if (m == 0 || m > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "point dimension must be in [1, 8]");
  }
  check_matrix(B, m);
  MetricSpec s;
  s.n = m;
  s.m = m;
  s.kind = MetricKind::componentwise_abs;
  s.B = std::move(B);
  s.b_class = matops::b_class(s.B);
  return s;
}

MetricSpec from_expressions(const std::vector<std::string>& components,
                            std::size_t m, Matrix B) {
  if (components.empty() || components.size() > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "metric needs 1 to 8 components");
  }
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "point dimension must be positive");
  check_matrix(B, components.size());
  MetricSpec s;
  s.n = components.size();
  s.m = m;
  s.kind = MetricKind::expression;
  s.sources = components;
  for (const auto& c : components) {
    expr::Expr e = expr::parse(c);
    if (expr::arity(e, expr::VarKind::x) || expr::arity(e, expr::VarKind::y)) {
      throw Error(ErrorCode::InvalidInput,
                  "metric component '" + c + "' may only use u1..um and v1..vm");
    }
    if (expr::arity(e, expr::VarKind::u) > m || expr::arity(e, expr::VarKind::v) > m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "metric component '" + c + "' uses a coordinate beyond m = " +
                      std::to_string(m));
    }
    s.components.push_back(std::move(e));
  }
  s.B = std::move(B);
  s.b_class = matops::b_class(s.B);
  return s;
}

MetricSpec with_matrix(MetricSpec spec, Matrix B) {
  check_matrix(B, spec.n);
  spec.B = std::move(B);
  spec.b_class = matops::b_class(spec.B);
  return spec;
}

MetricSpec scaled(MetricSpec spec, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "metric scale must be positive and finite");
  }
  spec.scale *= c;
  return spec;
}

bool example2_in_s(const Vec& p) {
  return std::abs(p[0] - p[1]) <= 1e-12 * (1.0 + std::abs(p[0]));
}

Vec eval_metric(const MetricSpec& spec, const Vec& u, const Vec& v) {
  if (u.size() != spec.m || v.size() != spec.m) {
    throw Error(ErrorCode::DimensionMismatch,
                "metric expects points of dimension " + std::to_string(spec.m));
  }
  Vec d(spec.n);
  switch (spec.kind) {
    case MetricKind::example1: {
      const double a = u[0] - v[0];
      const double b = std::abs(u[1] - v[1]);
      d[0] = a * a + b;
      d[1] = b;
      break;
    }
    case MetricKind::example2: {
      if (u == v) break;
      const double r = l1(u[0] - v[0], u[1] - v[1]);
      if (example2_in_s(u) && example2_in_s(v)) {
        d[0] = r * r;
        d[1] = r;
      } else {
        d[0] = r;
        d[1] = r * r;
      }
      break;
    }
    case MetricKind::componentwise_abs:
      for (std::size_t i = 0; i < spec.n; ++i) d[i] = std::abs(u[i] - v[i]);
      break;
    case MetricKind::expression: {
      const expr::Bindings env{{}, {}, u.span(), v.span()};
      for (std::size_t i = 0; i < spec.n; ++i) {
        try {
          d[i] = expr::eval(spec.components[i], env);
        } catch (const Error& e) {
          throw Error(ErrorCode::EvalError, "metric component " + std::to_string(i + 1) +
                                                " (" + spec.sources[i] + "): " + e.what());
        }
        if (!std::isfinite(d[i])) {
          throw Error(ErrorCode::EvalError,
                      "metric component " + std::to_string(i + 1) + " is not finite");
        }
      }
      break;
    }
  }
  if (spec.scale != 1.0) d *= spec.scale;
  return d;
}

bool within(const Vec& lhs, const Vec& rhs, double tol) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double slack = tol * (1.0 + std::max(std::abs(lhs[i]), std::abs(rhs[i])));
    if (!(lhs[i] <= rhs[i] + slack)) return false;
  }
  return true;
}

namespace {

class Checker {
 public:
  Checker(const MetricSpec& spec, ViolationReport& report)
      : spec_(spec), report_(report) {}

  void add(Violation v) {
    ++report_.violation_count;
    all_.push_back(std::move(v));
  }

  void check_pair(const Vec& duv, const Vec& dvu, const Vec& u, const Vec& v,
                  std::vector<std::size_t> idx) {
    const double tol = report_.tol;
    ++report_.checked.positivity;
    Vec zero(spec_.n);
    if (!within(zero, duv, tol)) {
      add({Axiom::positivity, idx, {u, v}, zero, duv, max_excess(zero, duv), "d(u,v) < 0"});
    }
    ++report_.checked.identity;
    const bool same = max_abs_diff_points(u, v) <= tol;
    const bool zero_d = duv.norm_inf() == 0.0;
    if (same && !within(duv, zero, tol)) {
      add({Axiom::identity, idx, {u, v}, duv, zero, max_excess(duv, zero),
           "u = v but d(u,v) != 0"});
    } else if (!same && zero_d) {
      add({Axiom::identity, idx, {u, v}, duv, zero, 0.0, "u != v but d(u,v) = 0"});
    }
    ++report_.checked.symmetry;
    if (!within(duv, dvu, tol) || !within(dvu, duv, tol)) {
      add({Axiom::symmetry, idx, {u, v}, duv, dvu, max_abs_diff_vec(duv, dvu),
           "d(u,v) != d(v,u)"});
    }
  }

  // d(u,w) <= B (d(u,v) + d(v,w))
  void check_triangle(const Vec& duw, const Vec& duv, const Vec& dvw, const Vec& u,
                      const Vec& v, const Vec& w, std::vector<std::size_t> idx,
                      const Matrix& B, std::string note = {}) {
    ++report_.checked.triangle;
    Vec rhs = B * (duv + dvw);
    if (!within(duw, rhs, report_.tol)) {
      add({Axiom::triangle, std::move(idx), {u, v, w}, duw, rhs, max_excess(duw, rhs),
           note.empty() ? "d(u,w) > B(d(u,v) + d(v,w))" : note});
    }
  }

  void finish() {
    std::stable_sort(all_.begin(), all_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.indices, a.axiom) < std::tie(b.indices, b.axiom);
    });
    if (all_.size() > kMaxReportedViolations) all_.resize(kMaxReportedViolations);
    report_.violations = std::move(all_);
  }

  static double max_abs_diff_points(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
  static double max_abs_diff_vec(const Vec& a, const Vec& b) {
    return max_abs_diff_points(a, b);
  }

 private:
  const MetricSpec& spec_;
  ViolationReport& report_;
  std::vector<Violation> all_;
};

// Distances between sample points, cached when the sample is small enough.
class DistanceTable {
 public:
  DistanceTable(const MetricSpec& spec, const std::vector<Vec>& pts)
      : spec_(spec), pts_(pts), n_(pts.size()) {
    if (n_ <= kCacheLimit) {
      cache_.reserve(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) cache_.push_back(eval_metric(spec_, pts_[i], pts_[j]));
    }
  }

  Vec operator()(std::size_t i, std::size_t j) const {
    if (!cache_.empty()) return cache_[i * n_ + j];
    return eval_metric(spec_, pts_[i], pts_[j]);
  }

 private:
  static constexpr std::size_t kCacheLimit = 1500;
  const MetricSpec& spec_;
  const std::vector<Vec>& pts_;
  std::size_t n_;
  std::vector<Vec> cache_;
};

}  // namespace

std::vector<Vec> sample_box(std::size_t m, std::size_t count, double lo, double hi,
                            std::uint64_t seed) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "sample box needs lo <= hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec p(m);
    for (auto& x : p) x = dist(rng);
    pts.push_back(std::move(p));
  }
  return pts;
}

ViolationReport verify_axioms(const MetricSpec& spec, const std::vector<Vec>& points,
                              double tol, std::uint64_t seed) {
  ViolationReport report;
  report.sample_size = points.size();
  report.seed = seed;
  report.tol = tol;
  report.sampler = "given points";
  for (const auto& p : points) {
    if (p.size() != spec.m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "sample point has dimension " + std::to_string(p.size()) +
                      ", metric expects " + std::to_string(spec.m));
    }
  }
  const std::size_t np = points.size();
  Checker check(spec, report);
  if (np == 0) {
    check.finish();
    return report;
  }

  std::optional<DistanceTable> table;
  try {
    table.emplace(spec, points);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EvalError) throw;
    check.add({Axiom::evaluation, {}, {}, {}, {}, 0.0, e.what()});
    check.finish();
    return report;
  }
  const DistanceTable& d = *table;

  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j)
      check.check_pair(d(i, j), d(j, i), points[i], points[j], {i, j});

  const double total = static_cast<double>(np) * np * np;
  if (total <= static_cast<double>(kMaxTriples)) {
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j)
        for (std::size_t k = 0; k < np; ++k)
          check.check_triangle(d(i, k), d(i, j), d(j, k), points[i], points[j], points[k],
                               {i, j, k}, spec.B);
  } else {
    report.subsampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    for (std::size_t t = 0; t < kMaxTriples; ++t) {
      const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
      check.check_triangle(d(i, k), d(i, j), d(j, k), points[i], points[j], points[k],
                           {i, j, k}, spec.B);
    }
  }
  check.finish();
  return report;
}

ViolationReport verify_random_triples(const MetricSpec& spec, std::size_t count, double lo,
                                      double hi, std::uint64_t seed, double tol) {
  ViolationReport report;
  report.seed = seed;
  report.tol = tol;
  report.sample_size = 3 * count;
  {
    std::ostringstream os;
    os << count << " uniform triples in [" << lo << ", " << hi << "]^" << spec.m;
    report.sampler = os.str();
  }
  const std::vector<Vec> pts = sample_box(spec.m, 3 * count, lo, hi, seed);
  Checker check(spec, report);
  for (std::size_t t = 0; t < count; ++t) {
    const Vec& u = pts[3 * t];
    const Vec& v = pts[3 * t + 1];
    const Vec& w = pts[3 * t + 2];
    const std::size_t a = 3 * t, b = a + 1, c = a + 2;
    try {
      const Vec duv = eval_metric(spec, u, v), dvu = eval_metric(spec, v, u);
      const Vec dvw = eval_metric(spec, v, w), dwv = eval_metric(spec, w, v);
      const Vec duw = eval_metric(spec, u, w), dwu = eval_metric(spec, w, u);
      check.check_pair(duv, dvu, u, v, {a, b});
      check.check_pair(dvw, dwv, v, w, {b, c});
      check.check_pair(duw, dwu, u, w, {a, c});
      check.check_triangle(duw, duv, dvw, u, v, w, {a, b, c}, spec.B);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EvalError) throw;
      check.add({Axiom::evaluation, {a, b, c}, {u, v, w}, {}, {}, 0.0, e.what()});
    }
  }
  check.finish();
  return report;
}

double induced_constant(const Matrix& B, Norm norm, double tol) {
  if (B.min_entry() < -tol) {
    throw Error(ErrorCode::NotPositive,
                "induced scalar constants need a nonnegative B (min entry " +
                    std::to_string(B.min_entry()) + ")");
  }
  const std::size_t n = B.dim();
  double r = 0.0;
  switch (norm) {
    case Norm::l1:
      for (std::size_t i = 0; i < n; ++i) {
        double mx = B(i, 0);
        for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, B(i, j));
        r += mx;
      }
      return r;
    case Norm::linf:
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += B(i, j);
        r = std::max(r, s);
      }
      return r;
    case Norm::l2:
      for (double x : B.entries()) r += x * x;
      return std::sqrt(r);
  }
  return r;
}

double rho(const Vec& d, Norm norm) {
  switch (norm) {
    case Norm::l1: return d.sum();
    case Norm::linf: return d.max();
    case Norm::l2: return d.norm2();
  }
  return 0.0;
}

double induced_rho(const MetricSpec& spec, Norm norm, const Vec& u, const Vec& v) {
  return rho(eval_metric(spec, u, v), norm);
}

double diameter(const MetricSpec& spec, const std::vector<Vec>& points) {
  double diam = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      diam = std::max(diam, eval_metric(spec, points[i], points[j]).sum());
  return diam;
}

ViolationReport example2_minimality_probe(const Matrix& candidate, double t, double alpha,
                                          double tol) {
  if (t == 0.0 || alpha == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "minimality probe needs t, alpha != 0");
  }
  const MetricSpec spec = with_matrix(example2(), candidate);
  ViolationReport report;
  report.tol = tol;
  report.sample_size = 4;
  {
    std::ostringstream os;
    os << "minimality probe t=" << t << " alpha=" << alpha;
    report.sampler = os.str();
  }
  Checker check(spec, report);
  const Vec x{t, t}, y{0, 0};
  const Vec z_out{alpha, 0}, z_in{alpha, alpha};
  // d(x,y) <= B (d(x,z) + d(z,y))
  check.check_triangle(eval_metric(spec, x, y), eval_metric(spec, x, z_out),
                       eval_metric(spec, z_out, y), x, z_out, y, {0}, candidate,
                       "x, y in S, z not in S");
  check.check_triangle(eval_metric(spec, x, y), eval_metric(spec, x, z_in),
                       eval_metric(spec, z_in, y), x, z_in, y, {1}, candidate,
                       "x, y, z in S");
  check.finish();
  return report;
}

}  // namespace vbm::metric
