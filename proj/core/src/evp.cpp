#include "vbm/evp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vbm/error.hpp"

namespace vbm::evp {

bool leq_slack(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i] + kSlack * (1.0 + std::abs(b[i])))) return false;
  return true;
}

double EpsSchedule::operator()(std::size_t k) const {
  return eps0 * std::pow(ratio, static_cast<double>(k));
}

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

[[noreturn]] void space_error(const std::string& msg, std::vector<std::size_t> witness) {
  throw HypothesisError(ErrorCode::HypothesisViolated, msg, -1, std::move(witness));
}

bool contains(const IndexSet& s, std::size_t x) {
  return std::binary_search(s.begin(), s.end(), x);
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> labels, std::vector<std::vector<Vec>> dist,
                         Matrix B)
    : labels_(std::move(labels)), B_(std::move(B)) {
  const std::size_t np = labels_.size();
  if (dist.size() != np) {
    throw Error(ErrorCode::DimensionMismatch, "dist must have one row per point");
  }
  dist_.reserve(np * np);
  for (auto& row : dist) {
    if (row.size() != np) throw Error(ErrorCode::DimensionMismatch, "dist must be square");
    for (auto& v : row) dist_.push_back(std::move(v));
  }
  validate();
}

FiniteSpace FiniteSpace::from_metric(const metric::MetricSpec& spec,
                                     const std::vector<Vec>& points,
                                     std::vector<std::string> labels) {
  FiniteSpace s;
  const std::size_t np = points.size();
  if (labels.empty()) {
    for (std::size_t i = 0; i < np; ++i) labels.push_back(idx(i));
  }
  if (labels.size() != np) throw Error(ErrorCode::DimensionMismatch, "one label per point");
  s.labels_ = std::move(labels);
  s.B_ = spec.B;
  s.coords_ = points;
  s.dist_.reserve(np * np);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j)
      s.dist_.push_back(i == j ? Vec(spec.n) : metric::eval_metric(spec, points[i], points[j]));
  s.validate();
  return s;
}

void FiniteSpace::validate() {
  const std::size_t np = size();
  const std::size_t n = B_.dim();
  if (np == 0) throw Error(ErrorCode::InvalidInput, "finite space needs at least one point");
  if (np > kMaxPoints) {
    throw Error(ErrorCode::InvalidInput, "finite space is capped at 10000 points");
  }
  if (n == 0) throw Error(ErrorCode::InvalidInput, "B is empty");
  if (!B_.all_finite()) throw Error(ErrorCode::NonFinite, "B has non-finite entries");
  gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const Vec& v = d(i, j);
      if (v.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dist[" + idx(i) + "][" + idx(j) + "] must have " + idx(n) + " components");
      }
      if (!v.all_finite()) throw Error(ErrorCode::NonFinite, "non-finite distance");
      if (i == j) {
        if (v.norm_inf() != 0.0) space_error("d(x, x) != 0 at point " + idx(i), {i});
        continue;
      }
      if (v.min() < 0.0) space_error("negative distance d(" + idx(i) + ", " + idx(j) + ")", {i, j});
      if (v.norm_inf() == 0.0) {
        space_error("distinct points " + idx(i) + ", " + idx(j) + " at distance zero", {i, j});
      }
      if (!leq_slack(v, d(j, i)) || !leq_slack(d(j, i), v)) {
        space_error("d(" + idx(i) + ", " + idx(j) + ") != d(" + idx(j) + ", " + idx(i) + ")",
                    {i, j});
      }
      gap_ = std::min(gap_, v.sum());
    }
  }
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j)
      for (std::size_t k = 0; k < np; ++k) {
        if (!leq_slack(d(i, k), B_ * (d(i, j) + d(j, k)))) {
          space_error("triangle inequality fails for (" + idx(i) + ", " + idx(j) + ", " +
                          idx(k) + ")",
                      {i, j, k});
        }
      }
}

FiniteSpace FiniteSpace::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "scale must be positive and finite");
  }
  FiniteSpace s = *this;
  for (auto& v : s.dist_) v *= c;
  s.gap_ = gap_ * c;
  return s;
}

// ---------------------------------------------------------------------------

std::size_t cantor_intersect(const FiniteSpace& space, const std::vector<IndexSet>& sets) {
  if (sets.empty()) throw Error(ErrorCode::EmptySet, "no sets given");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].empty()) throw Error(ErrorCode::EmptySet, "set " + idx(k) + " is empty");
    for (std::size_t x : sets[k]) {
      if (x >= space.size()) throw Error(ErrorCode::InvalidInput, "index out of range");
    }
    if (k > 0) {
      IndexSet a = sets[k - 1], b = sets[k];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (!std::includes(a.begin(), a.end(), b.begin(), b.end())) {
        throw Error(ErrorCode::NotDescending, "set " + idx(k) + " is not contained in set " +
                                                  idx(k - 1));
      }
    }
  }
  const IndexSet& last = sets.back();
  for (std::size_t a = 0; a < last.size(); ++a)
    for (std::size_t b = a + 1; b < last.size(); ++b)
      if (last[a] != last[b] && space.d(last[a], last[b]).norm_inf() > 0.0) {
        throw HypothesisError(ErrorCode::HypothesisViolated,
                              "diameters do not vanish: points " + idx(last[a]) + " and " +
                                  idx(last[b]) + " stay in every set",
                              static_cast<long>(sets.size() - 1), {last[a], last[b]});
      }
  return last.front();
}

std::optional<std::size_t> find_H_point(const FiniteSpace& space, const std::vector<Vec>& f,
                                        const IndexSet& F, double eps) {
  const Vec e = Vec::ones(space.n());
  IndexSet sorted = F;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t p : sorted) {
    bool good = true;
    for (std::size_t x : sorted) {
      if (!leq(f[p], f[x] + eps * e)) {
        good = false;
        break;
      }
    }
    if (good) return p;
  }
  return std::nullopt;
}

namespace {

void validate_f(const FiniteSpace& space, const std::vector<Vec>& f, std::size_t x0) {
  if (f.size() != space.size()) {
    throw Error(ErrorCode::DimensionMismatch, "f needs one value per point");
  }
  for (const auto& v : f) {
    if (v.size() != space.n()) {
      throw Error(ErrorCode::DimensionMismatch, "f values must have " + idx(space.n()) +
                                                    " components");
    }
    if (!v.all_finite()) throw Error(ErrorCode::NonFinite, "f has non-finite values");
  }
  if (x0 >= space.size()) throw Error(ErrorCode::InvalidInput, "x0 out of range");
}

void validate_schedule(const EpsSchedule& s) {
  if (!(s.eps0 > 0.0) || !(s.ratio > 0.0 && s.ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "eps schedule needs eps0 > 0 and ratio in (0, 1)");
  }
}

std::string set_text(const IndexSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << s[i];
  os << '}';
  return os.str();
}

}  // namespace

EkelandTrace ekeland_weak(const FiniteSpace& space, const std::vector<Vec>& f, std::size_t x0,
                          const EpsSchedule& schedule) {
  validate_f(space, f, x0);
  validate_schedule(schedule);
  const std::size_t np = space.size();
  auto member = [&](std::size_t x, std::size_t xk) {
    return leq_slack(f[x] + space.d(x, xk), f[xk]);
  };

  EkelandTrace t;
  t.x0 = x0;
  t.x.push_back(x0);
  t.eps.push_back(0.0);
  IndexSet F0;
  for (std::size_t x = 0; x < np; ++x)
    if (member(x, x0)) F0.push_back(x);
  t.F.push_back(std::move(F0));

  std::size_t cap = 64;
  if (std::isfinite(space.gap()) && schedule.eps0 > space.gap()) {
    cap += static_cast<std::size_t>(
        std::ceil(std::log(schedule.eps0 / space.gap()) / std::log(1.0 / schedule.ratio)));
  }
  for (std::size_t k = 1; t.F.back().size() > 1; ++k) {
    if (k > cap) {
      throw Error(ErrorCode::InternalError,
                  "F(x_k) did not shrink to a point within " + idx(cap) + " steps");
    }
    const double eps = schedule(k);
    const IndexSet& prev = t.F.back();
    const auto p = find_H_point(space, f, prev, eps);
    if (!p) {
      std::ostringstream os;
      os << "no (H)-point at step " << k << " with eps = " << eps << " on F = "
         << set_text(prev);
      throw HypothesisError(ErrorCode::ConditionHFailed, os.str(), static_cast<long>(k), prev);
    }
    IndexSet next;
    for (std::size_t x : prev)
      if (member(x, *p)) next.push_back(x);
    t.x.push_back(*p);
    t.eps.push_back(eps);
    t.F.push_back(std::move(next));
  }
  t.x_star = t.F.back().front();
  t.conclusions = verify_conclusions(t, space, f);
  if (!t.conclusions.ok()) {
    std::string msg = "conclusions fail on a verified instance:";
    for (const auto& s : t.conclusions.failures) msg += " " + s + ";";
    throw Error(ErrorCode::ConclusionViolated, msg);
  }
  return t;
}

Conclusions verify_conclusions(const EkelandTrace& trace, const FiniteSpace& space,
                               const std::vector<Vec>& f) {
  Conclusions c;
  const std::size_t np = space.size();
  const std::size_t n = space.n();
  const std::size_t xs = trace.x_star;
  const std::size_t K = trace.x.size();
  if (K == 0 || trace.F.size() != K || xs >= np) {
    c.failures.push_back("malformed trace");
    return c;
  }

  c.nested = true;
  for (std::size_t k = 0; k < K; ++k) {
    const IndexSet& Fk = trace.F[k];
    if (!std::is_sorted(Fk.begin(), Fk.end()) || !contains(Fk, xs)) {
      c.nested = false;
      c.failures.push_back("x* not in F_" + idx(k));
    }
    if (k > 0) {
      const IndexSet& Fp = trace.F[k - 1];
      if (!std::includes(Fp.begin(), Fp.end(), Fk.begin(), Fk.end())) {
        c.nested = false;
        c.failures.push_back("F_" + idx(k) + " not inside F_" + idx(k - 1));
      }
      if (!contains(Fp, trace.x[k])) {
        c.nested = false;
        c.failures.push_back("x_" + idx(k) + " not in F_" + idx(k - 1));
      }
    }
  }

  c.shrinking = true;
  const Vec e = Vec::ones(n);
  for (std::size_t k = 1; k < K; ++k)
    for (std::size_t y : trace.F[k])
      if (!leq_slack(space.d(y, trace.x[k]), trace.eps[k] * e)) {
        c.shrinking = false;
        c.failures.push_back("d(" + idx(y) + ", x_" + idx(k) + ") exceeds eps_k");
      }

  const std::size_t x0 = trace.x.front();
  c.c1_lhs = f[xs];
  c.c1_rhs = f[x0] - space.d(xs, x0);
  c.c1 = leq_slack(c.c1_lhs, c.c1_rhs);
  if (!c.c1) c.failures.push_back("f(x*) > f(x0) - d(x*, x0)");

  const Matrix BmI = space.B() - Matrix::identity(n);
  c.c2 = c.c3 = true;
  for (std::size_t x = 0; x < np; ++x) {
    if (x == xs) continue;
    std::optional<StrictWitness> w2, w3;
    const Vec bd = space.B() * space.d(xs, x);
    for (std::size_t k = 0; k < K && !(w2 && w3); ++k) {
      const std::size_t xk = trace.x[k];
      const Vec extra = BmI * space.d(xs, xk);
      for (std::size_t i = 0; i < n; ++i) {
        if (!w2) {
          const double lhs = f[xs][i] + space.d(xs, xk)[i];
          const double rhs = f[x][i] + space.d(x, xk)[i];
          if (lhs < rhs) w2 = StrictWitness{x, k, i, lhs, rhs};
        }
        if (!w3) {
          const double lhs = f[xs][i];
          const double rhs = f[x][i] + bd[i] + extra[i];
          if (lhs < rhs + kSlack * (1.0 + std::abs(rhs))) w3 = StrictWitness{x, k, i, lhs, rhs};
        }
      }
    }
    if (w2) {
      c.c2_witnesses.push_back(*w2);
    } else {
      c.c2 = false;
      c.failures.push_back("no strict witness for point " + idx(x) + " in the uniqueness test");
    }
    if (w3) {
      c.c3_witnesses.push_back(*w3);
    } else {
      c.c3 = false;
      c.failures.push_back("no strict witness for point " + idx(x) + " in the B-weighted test");
    }
  }
  return c;
}

StrongResult ekeland_strong(const FiniteSpace& space, const std::vector<Vec>& f, std::size_t x0,
                            double eps, double delta, const EpsSchedule& schedule) {
  validate_f(space, f, x0);
  if (!(eps > 0.0) || !(delta > 0.0) || !std::isfinite(eps) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "eps and delta must be positive");
  }
  const Vec e = Vec::ones(space.n());
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (!leq_slack(f[x0], f[x] + eps * e)) {
      std::ostringstream os;
      os << "f(x0) <= f(x) + eps e fails at x = " << x << ": " << f[x0] << " vs " << f[x];
      throw HypothesisError(ErrorCode::PreconditionCiFailed, os.str(), -1, {x});
    }
  }
  StrongResult r;
  r.eps = eps;
  r.delta = delta;
  r.trace = ekeland_weak(space.scaled(eps / delta), f, x0, schedule);
  r.trace.metric_scale = eps / delta;
  const std::size_t xs = r.trace.x_star;
  r.s1 = leq_slack(f[xs], f[x0]);
  r.d_star_x0 = space.d(xs, x0);
  r.s2 = leq_slack(r.d_star_x0, delta * e);
  if (!r.s1 || !r.s2) {
    throw Error(ErrorCode::ConclusionViolated,
                r.s1 ? "d(x*, x0) > delta e" : "f(x*) > f(x0)");
  }
  return r;
}

CaristiResult caristi_solve(const FiniteSpace& space, const std::vector<Vec>& f,
                            const IndexSet& N, std::size_t x0, const EpsSchedule& schedule) {
  validate_f(space, f, x0);
  const std::size_t np = space.size();
  if (N.size() != np) throw Error(ErrorCode::DimensionMismatch, "N needs one image per point");
  for (std::size_t v : N)
    if (v >= np) throw Error(ErrorCode::InvalidInput, "N maps outside the space");
  const Matrix& B = space.B();

  for (std::size_t x = 0; x < np; ++x) {
    const Vec bd = B * space.d(N[x], x);
    for (std::size_t y = 0; y < np; ++y) {
      if (!leq_slack(space.d(N[x], y), space.d(x, y) + bd)) {
        std::ostringstream os;
        os << "d(N x, y) <= d(x, y) + B d(N x, x) fails at x = " << x << ", y = " << y;
        throw HypothesisError(ErrorCode::Cc1Violated, os.str(), -1, {x, y});
      }
    }
    if (!leq_slack(bd, f[x] - f[N[x]])) {
      std::ostringstream os;
      os << "B d(N x, x) <= f(x) - f(N x) fails at x = " << x << ": " << bd << " > "
         << f[x] - f[N[x]];
      throw HypothesisError(ErrorCode::Cc2Violated, os.str(), -1, {x});
    }
  }

  CaristiResult r;
  for (std::size_t x = 0; x < np; ++x)
    if (N[x] == x) r.fixed_points.push_back(x);
  r.trace = ekeland_weak(space, f, x0, schedule);
  r.x_star = r.trace.x_star;
  if (N[r.x_star] != r.x_star || !contains(r.fixed_points, r.x_star)) {
    throw Error(ErrorCode::NoFixedPoint,
                "Ekeland point " + idx(r.x_star) + " is not fixed by N under verified hypotheses");
  }
  return r;
}

}  // namespace vbm::evp
