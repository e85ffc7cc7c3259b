// Acceptance suite: one PASS/FAIL line per criterion.
//
//   vbm_acceptance <path to vbm binary> <problems dir>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evp_instances.hpp"
#include "oracles.hpp"
#include "vbm/error.hpp"
#include "vbm/evp.hpp"
#include "vbm/matops.hpp"
#include "vbm/metric.hpp"
#include "vbm/solver.hpp"

using namespace vbm;
using vbm::testing::Rng;

namespace {

// Pinned tolerances.
constexpr double kRadiusExclusion = 1e-6;   // criterion 1: skip |r - 1| below this
constexpr double kNeumannAgreement = 1e-6;  // criterion 1: relative, series vs LU
constexpr double kExample1Inverse = 1e-12;  // criterion 2
constexpr double kBoundSlack = 1e-9;        // criteria 4, 6
constexpr double kStopTarget = 1e-8;        // criterion 4
constexpr double kUniqueness = 1e-7;        // criterion 5, rho_1
constexpr double kAvramescuResidual = 1e-8; // criterion 7
constexpr double kContinuitySlack = 1e-9;   // criterion 7
constexpr double kCriterion1Seconds = 30.0;
constexpr double kCriterion3Seconds = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  std::size_t tested = 0, skipped = 0, disagreements = 0, oracle_mismatch = 0;
  while (tested < 10000) {
    const std::size_t n = 2 + rng.index(3);
    const Matrix m = vbm::testing::random_matrix(rng, n, 0.0, 1.5);
    const double r_oracle = vbm::testing::eigen_spectral_radius(m);
    if (std::abs(r_oracle - 1.0) < kRadiusExclusion) {
      ++skipped;
      continue;
    }
    ++tested;
    const Matrix imm = Matrix::identity(n) - m;
    const bool a = matops::is_convergent_to_zero(m).convergent;
    const bool b = matops::spectral_radius(m) < 1.0;
    bool c = false;
    try {
      const Matrix series = matops::neumann_inverse(m);
      const Matrix lu = vbm::testing::eigen_inverse(imm);
      c = lu.dim() == n &&
          vbm::testing::all_close(series, lu, kNeumannAgreement * (1.0 + lu.max_abs()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConvergent) throw;
    }
    const bool d = matops::is_inverse_positive(imm).inverse_positive;
    if (!(a == b && b == c && c == d)) ++disagreements;
    if (b != (r_oracle < 1.0)) ++oracle_mismatch;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = disagreements == 0 && oracle_mismatch == 0 && secs < kCriterion1Seconds;
  o.detail = (Detail() << tested << " matrices (" << skipped << " near r=1 skipped), "
                       << disagreements << " disagreements among (a)-(d), " << oracle_mismatch
                       << " radius verdicts differing from the eigenvalue oracle, " << secs << " s")
                 .str();
  return o;
}

Outcome criterion2() {
  Rng rng(1002);
  std::size_t disagreements = 0, inverse_positive = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.index(4);
    const Matrix m = vbm::testing::random_z_matrix(rng, n);
    const bool ip = matops::is_inverse_positive(m).inverse_positive;
    const auto mono = matops::is_monotone_sampled(m, 200, 2000 + t);
    const bool split = matops::split_representation(m).certified;
    const bool monotone = mono.verdict == matops::Monotonicity::monotone;
    if (mono.verdict == matops::Monotonicity::inconclusive || ip != monotone || ip != split)
      ++disagreements;
    inverse_positive += ip;
  }
  const auto ex1 = matops::is_inverse_positive(Matrix{{2, -1}, {0, 1}});
  const Matrix expected{{0.5, 0.5}, {0, 1}};
  const bool ex1_ok = ex1.inverse_positive && ex1.inverse &&
                      vbm::testing::all_close(*ex1.inverse, expected, kExample1Inverse);
  Outcome o;
  o.pass = disagreements == 0 && ex1_ok;
  o.detail = (Detail() << "1000 Z-matrices (" << inverse_positive << " inverse-positive), "
                       << disagreements << " disagreements; Example 1 inverse "
                       << (ex1_ok ? "matches" : "does not match"))
                 .str();
  return o;
}

Vec example2_oracle(const Vec& u, const Vec& v) {
  const double z = std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]);
  const bool us = u[0] == u[1], vs = v[0] == v[1];
  if (us && vs) return {z * z, z};
  return {z, z * z};
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e1 = metric::verify_random_triples(metric::example1(), 10000, -10, 10, 3001);
  const auto e2 = metric::verify_random_triples(metric::example2(), 10000, -10, 10, 3002);
  struct Probe {
    Matrix candidate;
    double t, alpha;
    const char* name;
  };
  const Probe probes[] = {
      {Matrix{{2, 1.9}, {1, 1}}, 1000, 1000, "b12=1.9"},
      {Matrix{{2, 2}, {0.9, 1}}, 0.01, 0.005, "b21=0.9"},
      {Matrix{{1.9, 2}, {1, 1}}, 1000, 500, "b11=1.9"},
      {Matrix{{2, 2}, {1, 0.9}}, 0.01, 0.005, "b22=0.9"},
  };
  std::size_t probes_ok = 0;
  for (const auto& p : probes) {
    const auto r = metric::example2_minimality_probe(p.candidate, p.t, p.alpha);
    bool confirmed = false;
    for (const auto& v : r.violations) {
      if (v.points.size() != 3) continue;
      // Independent re-evaluation of the reported triple.
      const Vec lhs = example2_oracle(v.points[0], v.points[2]);
      const Vec rhs = p.candidate * (example2_oracle(v.points[0], v.points[1]) +
                                     example2_oracle(v.points[1], v.points[2]));
      for (std::size_t i = 0; i < 2; ++i) confirmed = confirmed || lhs[i] > rhs[i] * (1 + 1e-12);
    }
    probes_ok += confirmed;
  }
  const bool b0_probe = metric::example2_minimality_probe(Matrix{{2, 2}, {1, 1}}, 1000, 500).ok();
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = e1.ok() && e2.ok() && probes_ok == 4 && secs < kCriterion3Seconds;
  Detail d;
  d << "Example 1: " << e1.violation_count << " violations in " << e1.checked.triangle
    << " triangle checks; Example 2 with B0: " << e2.violation_count << " violations in "
    << e2.checked.triangle << " triangle checks";
  if (!e2.violations.empty()) {
    const auto& v = e2.violations.front();
    d << " (first: u=" << v.points[0] << " v=" << v.points[1] << " w=" << v.points[2]
      << " lhs=" << v.lhs << " rhs=" << v.rhs << ")";
  }
  d << "; minimality probe confirmed " << probes_ok << "/4, B0 on probe families "
    << (b0_probe ? "clean" : "violated") << "; " << secs << " s";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// x -> (x1/2 + 1, x1/4 + x2/2 + 1) with x* = (2, 3).

const Matrix kAffineA{{0.5, 0}, {0.25, 0.5}};
const Vec kAffineStar{2, 3};

Vec affine_map(const Vec& x) { return {0.5 * x[0] + 1, 0.25 * x[0] + 0.5 * x[1] + 1}; }

solver::ContractionProblem affine_problem(Vec x0) {
  solver::ContractionProblem p;
  p.N = solver::Operator::from_expressions({"0.5*x1 + 1", "0.25*x1 + 0.5*x2 + 1"}, 2);
  p.metric = metric::componentwise_abs(2, Matrix::identity(2));
  p.A = kAffineA;
  p.x0 = std::move(x0);
  p.tol = {kStopTarget, kStopTarget};
  p.max_iter = 1000;
  return p;
}

Outcome criterion4() {
  const auto p = affine_problem({0, 0});
  const auto r = solver::perov_solve(p);
  const Matrix phi = vbm::testing::eigen_inverse(Matrix::identity(2) - kAffineA);
  Vec x = p.x0;
  const Vec d01 = abs(affine_map(x) - x);
  std::size_t bound_failures = 0, bound_mismatch = 0;
  std::optional<std::size_t> first_k;
  Vec akd = d01;
  Vec error_at_stop;
  const std::size_t rows = r.certificate.rows.size();
  for (std::size_t k = 0; k < rows; ++k) {
    const Vec err = abs(x - kAffineStar);
    const Vec bound = phi * akd;
    const auto& row = r.certificate.rows[k];
    if (!leq(err, row.bound, kBoundSlack)) ++bound_failures;
    if (!vbm::testing::all_close(bound, row.bound, 1e-12 * (1 + bound.norm_inf()))) ++bound_mismatch;
    const Vec lib = solver::apriori_bound(kAffineA, Matrix::identity(2), d01, k, solver::BoundCase::b);
    if (!vbm::testing::all_close(bound, lib, 1e-12 * (1 + bound.norm_inf()))) ++bound_mismatch;
    if (!first_k && leq(bound, Vec{kStopTarget, kStopTarget})) {
      first_k = k;
      error_at_stop = err;
    }
    x = affine_map(x);
    akd = kAffineA * akd;
  }
  Outcome o;
  o.pass = r.ok() && bound_failures == 0 && bound_mismatch == 0 && first_k &&
           *first_k == r.iterations && rows == r.iterations + 1 &&
           leq(error_at_stop, Vec{kStopTarget, kStopTarget});
  Detail d;
  d << rows << " iterates, " << bound_failures << " bound failures, " << bound_mismatch
    << " bound mismatches against (I-A)^-1 A^k d01; stopped at k=" << r.iterations;
  if (first_k) d << " (first k with bound <= 1e-8: " << *first_k << ", error " << error_at_stop << ")";
  o.detail = d.str();
  return o;
}

Outcome criterion5() {
  Rng rng(1005);
  double worst_affine = 0.0, worst_ex1 = 0.0;
  bool all_ok = true;
  for (int t = 0; t < 10; ++t) {
    const auto r = solver::perov_solve(affine_problem(vbm::testing::random_vec(rng, 2, -100, 100)));
    all_ok = all_ok && r.ok();
    worst_affine = std::max(worst_affine, metric::rho(abs(r.x_star - kAffineStar), metric::Norm::l1));
  }
  // Example 1 metric, N = (x1/2 + 1, x2/4), A = [[1/4,1/2],[0,1/4]], x* = (2, 0).
  std::optional<Vec> ref;
  for (int t = 0; t < 10; ++t) {
    solver::ContractionProblem p;
    p.N = solver::Operator::from_expressions({"x1/2 + 1", "x2/4"}, 2);
    p.metric = metric::example1();
    p.A = Matrix{{0.25, 0.5}, {0, 0.25}};
    p.x0 = vbm::testing::random_vec(rng, 2, -50, 50);
    p.tol = {1e-12, 1e-12};
    const auto r = solver::perov_solve(p);
    all_ok = all_ok && r.ok();
    if (!ref) ref = r.x_star;
    // rho_1 of Example 1's d is |dx1|^2 + 2 |dx2|.
    auto rho1 = [](const Vec& u, const Vec& v) {
      const double a = std::abs(u[0] - v[0]), b = std::abs(u[1] - v[1]);
      return a * a + 2 * b;
    };
    worst_ex1 = std::max({worst_ex1, rho1(r.x_star, *ref), rho1(r.x_star, Vec{2, 0})});
  }
  Outcome o;
  o.pass = all_ok && worst_affine < kUniqueness && worst_ex1 < kUniqueness;
  o.detail = (Detail() << "affine: max rho_1 to (2,3) = " << worst_affine
                       << "; Example 1 contraction: max rho_1 to (2,0) and between runs = " << worst_ex1)
                 .str();
  return o;
}

Outcome criterion6() {
  auto p = affine_problem({0, 0});
  p.max_iter = 60;
  const Matrix phi = vbm::testing::eigen_inverse(Matrix::identity(2) - kAffineA);
  const auto rz = solver::rz_stability_check(p);
  std::size_t rz_fail = 0;
  for (const auto& row : rz.rows) {
    const Vec err = abs(row.x - kAffineStar);
    const Vec bound = phi * abs(affine_map(row.x) - row.x);
    if (!leq(err, bound, kBoundSlack) || !row.holds) ++rz_fail;
  }
  const auto ost = solver::ostrowski_run(p, solver::Schedule::geometric(2, 1.0, 0.5));
  // Independent majorant with G = A, H = I for B = I.
  std::size_t ost_fail = 0;
  Vec m = abs(p.x0 - kAffineStar);
  Vec x = p.x0;
  for (std::size_t k = 0; k < ost.rows.size(); ++k) {
    const auto& row = ost.rows[k];
    const Vec err = abs(x - kAffineStar);
    if (!vbm::testing::all_close(row.x, x, 1e-12) || !leq(err, m, kBoundSlack) || !row.holds)
      ++ost_fail;
    const double e = std::ldexp(1.0, -static_cast<int>(k));
    const Vec next = affine_map(x) + Vec{e, e};
    m = abs(next - affine_map(x)) + kAffineA * m;
    x = next;
  }
  const Vec final_err = abs(ost.rows.back().x - kAffineStar);
  Outcome o;
  o.pass = rz.bound_holds && rz_fail == 0 && !rz.rows.empty() && ost.majorant_holds &&
           ost_fail == 0 && ost.converges && final_err.norm_inf() < 1e-9;
  o.detail = (Detail() << "RZ: " << rz.rows.size() << " iterates, " << rz_fail
                       << " failures; Ostrowski 2^-k: " << ost.rows.size() << " iterates, "
                       << ost_fail << " majorant failures, final error " << final_err)
                 .str();
  return o;
}

Outcome criterion7() {
  using solver::Operator;
  solver::AvramescuProblem p;
  p.metric = metric::componentwise_abs(1, Matrix::identity(1));
  p.A = Matrix{{0.5}};
  p.x0 = {0};
  p.dbox = {{0.0, 1.0}};
  p.inner_tol = {1e-12};
  p.samples = 1000;

  struct Instance {
    const char* n1;
    const char* n2;
    double x, y;
    std::function<double(double)> S;  // closed-form fixed point of N1(., y)
    std::function<double(double, double)> N1;
  };
  const Instance instances[] = {
      {"0.5*x1 + y1", "0.25*x1", 0.0, 0.0, [](double y) { return 2 * y; },
       [](double x, double y) { return 0.5 * x + y; }},
      {"0.5*x1 + 0.5", "0.3", 1.0, 0.3, [](double) { return 1.0; },
       [](double x, double) { return 0.5 * x + 0.5; }},
  };
  Outcome o;
  Detail d;
  Rng rng(1007);
  for (const auto& in : instances) {
    p.N1 = Operator::from_expressions({in.n1}, 1, 1);
    p.N2 = Operator::from_expressions({in.n2}, 1, 1);
    const auto r = solver::avramescu_solve(p);
    // Phi = (1 - 1/2)^-1 = 2 for B = I, A = [1/2].
    std::size_t fails = 0;
    for (int s = 0; s < 1000; ++s) {
      const double y = rng.unit(), ybar = rng.unit();
      const double lhs = std::abs(in.S(y) - in.S(ybar));
      const double rhs = 2.0 * std::abs(in.N1(in.S(ybar), y) - in.N1(in.S(ybar), ybar));
      if (lhs > rhs + kContinuitySlack) ++fails;
    }
    const bool ok = r.ok() && r.residual_x <= kAvramescuResidual && r.residual_y <= kAvramescuResidual &&
                    std::abs(r.x_star[0] - in.x) <= kAvramescuResidual * 10 &&
                    std::abs(r.y_star[0] - in.y) <= kAvramescuResidual * 10 &&
                    r.continuity.checked == 1000 && r.continuity.failures == 0 && fails == 0;
    o.pass = o.pass && ok;
    d << "(y*,x*)=(" << r.y_star[0] << "," << r.x_star[0] << ") residuals " << r.residual_x << "/"
      << r.residual_y << ", continuity " << r.continuity.failures << "/" << r.continuity.checked
      << " library and " << fails << "/1000 closed-form failures; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  Detail d;
  {
    std::vector<Vec> pts{{0}, {1}, {2}};
    const auto s = evp::FiniteSpace::from_metric(metric::componentwise_abs(1, Matrix{{1}}), pts);
    const std::vector<Vec> f{{0}, {1}, {4}};
    const auto t = evp::ekeland_weak(s, f, 2);
    const bool exact = t.x == std::vector<std::size_t>{2, 0} &&
                       t.F == std::vector<evp::IndexSet>{{0, 1, 2}, {0}} && t.x_star == 0 &&
                       t.conclusions.ok() && !vbm::testing::replay_trace(t, s, f, {}, 1.0);
    o.pass = exact;
    d << "x012 trace " << (exact ? "matches" : "differs") << "; ";
  }
  Rng rng(1008);
  int verified = 0, invalid = 0, h_failed = 0, wrong = 0;
  std::string first_wrong;
  for (int t = 0; t < 100; ++t) {
    const std::size_t np = 1 + rng.index(50), n = 1 + rng.index(3);
    const auto raw = vbm::testing::random_space(rng, np, n, rng.coin(), rng.coin(0.3));
    const auto f = vbm::testing::random_f(rng, np, n, rng.coin(0.7));
    const std::size_t x0 = rng.coin() ? vbm::testing::top_point(f) : rng.index(np);
    auto miss = [&](const std::string& why) {
      ++wrong;
      if (first_wrong.empty()) first_wrong = "instance " + std::to_string(t) + ": " + why;
    };
    std::optional<evp::FiniteSpace> s;
    try {
      s.emplace(raw.labels, raw.dist, raw.B);
    } catch (const HypothesisError& e) {
      ++invalid;
      if (e.code() != ErrorCode::HypothesisViolated || !vbm::testing::witness_breaks_axiom(raw, e.witness()))
        miss("space rejected without a genuine witness");
      continue;
    }
    if (!vbm::testing::raw_space_valid(raw)) {
      miss("space accepted but an axiom fails");
      continue;
    }
    try {
      const auto tr = evp::ekeland_weak(*s, f, x0);
      if (auto bad = vbm::testing::replay_trace(tr, *s, f, {}, 1.0)) {
        miss(*bad);
      } else {
        ++verified;
      }
    } catch (const HypothesisError& e) {
      ++h_failed;
      if (e.code() != ErrorCode::ConditionHFailed ||
          vbm::testing::has_H_point(*s, f, e.witness(), std::pow(0.5, static_cast<double>(e.step()))))
        miss("(H) reported failed but an (H)-point exists");
    } catch (const Error& e) {
      miss(std::string("unexpected error: ") + e.what());
    }
  }
  o.pass = o.pass && wrong == 0 && verified > 0;
  d << "100 random instances: " << verified << " traces replayed with all witnesses checked, "
    << invalid << " spaces rejected with a genuine axiom witness, " << h_failed
    << " (H) failures confirmed, " << wrong << " wrong";
  if (!first_wrong.empty()) d << " (" << first_wrong << ")";
  o.detail = d.str();
  return o;
}

Outcome criterion9() {
  Rng rng(1009);
  int in_set = 0, hyp_fail = 0;
  for (int t = 0; t < 100; ++t) {
    const auto c = vbm::testing::random_caristi(rng, 1 + rng.index(50), 1 + rng.index(3));
    const std::size_t np = c.N.size();
    const auto& d = c.space.dist;
    // Independent check of both conditions.
    bool hyp = true;
    for (std::size_t x = 0; x < np; ++x) {
      const Vec bd = c.space.B * d[c.N[x]][x];
      hyp = hyp && vbm::testing::leq_s(bd, c.f[x] - c.f[c.N[x]]);
      for (std::size_t y = 0; y < np; ++y) hyp = hyp && vbm::testing::leq_s(d[c.N[x]][y], d[x][y] + bd);
    }
    if (!hyp) {
      ++hyp_fail;
      continue;
    }
    const evp::FiniteSpace s(c.space.labels, c.space.dist, c.space.B);
    try {
      const auto r = evp::caristi_solve(s, c.f, c.N, c.x0);
      if (c.N[r.x_star] == r.x_star) ++in_set;
    } catch (const Error&) {
    }
  }
  Outcome o;
  o.pass = hyp_fail == 0 && in_set == 100;
  o.detail = (Detail() << in_set << "/100 outputs in the brute-force fixed-point set ("
                       << hyp_fail << " generated instances failed the independent (cc1)-(cc2) check)")
                 .str();
  return o;
}

Outcome criterion10() {
  Rng rng(1010);
  Outcome o;
  Detail d;
  for (int b : {1, 2}) {
    std::size_t points = 0, missing = 0, classical_fail = 0, runs = 0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t np = 2 + rng.index(30);
      std::vector<double> xs;
      std::vector<Vec> f;
      for (std::size_t i = 0; i < np; ++i) {
        xs.push_back(rng.uniform(0.0, 5.0));
        f.push_back({rng.uniform(0.0, 10.0)});
      }
      auto rho = [&](std::size_t a, std::size_t c) {
        const double z = std::abs(xs[a] - xs[c]);
        return b == 1 ? z : z * z;
      };
      std::vector<std::vector<Vec>> dist(np, std::vector<Vec>(np, Vec(1)));
      std::vector<std::string> labels;
      for (std::size_t a = 0; a < np; ++a) {
        labels.push_back(std::to_string(a));
        for (std::size_t c = 0; c < np; ++c) dist[a][c] = {rho(a, c)};
      }
      const evp::FiniteSpace s(labels, dist, Matrix{{static_cast<double>(b)}});
      const auto tr = evp::ekeland_weak(s, f, rng.index(np));
      ++runs;
      const std::size_t xs_i = tr.x_star;
      for (std::size_t x = 0; x < np; ++x) {
        if (x == xs_i) continue;
        ++points;
        bool found = false;
        for (std::size_t k = 0; k < tr.x.size() && !found; ++k) {
          const double rhs = f[x][0] + b * rho(xs_i, x) + (b - 1) * rho(xs_i, tr.x[k]);
          found = f[xs_i][0] < rhs + vbm::testing::slack_of(rhs);
        }
        if (!found) ++missing;
        if (b == 1 && !(f[xs_i][0] < f[x][0] + rho(xs_i, x))) ++classical_fail;
      }
    }
    o.pass = o.pass && missing == 0 && classical_fail == 0;
    d << "b=" << b << ": " << runs << " runs, " << points << " points x != x*, " << missing
      << " without a (k,i) witness";
    if (b == 1) d << ", " << classical_fail << " classical strict-inequality failures";
    d << "; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

struct ProcessResult {
  int status = -1;
  std::string out;
};

ProcessResult run_process(const std::string& cmd) {
  ProcessResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  r.status = pclose(p);
  return r;
}

Outcome criterion11(const std::string& vbm_bin, const std::string& problems) {
  const std::pair<const char*, const char*> runs[] = {
      {"solve", "affine_perov"},
      {"solve", "example1_contraction"},
      {"solve", "wrong_contraction"},
      {"solve", "graph_square"},
      {"solve", "maia_scaled"},
      {"solve", "avramescu_linear"},
      {"solve", "avramescu_constant"},
      {"stability", "affine_perov"},
      {"stability", "affine_ostrowski"},
      {"stability", "affine_constant_perturbation"},
      {"check-matrix", "matrix_example1"},
      {"check-matrix", "matrix_convergent"},
      {"verify-metric", "metric_example1"},
      {"verify-metric", "metric_example2"},
      {"verify-metric", "metric_expression"},
      {"ekeland", "evp_x012"},
      {"ekeland", "evp_x012_strong"},
      {"ekeland", "evp_condition_h_fails"},
      {"ekeland", "caristi_two_point"},
  };
  std::size_t identical = 0, total = 0;
  std::string first_diff;
  for (const auto& [sub, name] : runs) {
    for (const char* fmt : {"json", "text"}) {
      const std::string cmd = "'" + vbm_bin + "' " + sub + " -i '" + problems + "/" + name +
                              ".json' --seed 7 --format " + fmt + " 2>/dev/null";
      const auto a = run_process(cmd);
      const auto b = run_process(cmd);
      ++total;
      if (a.status == b.status && a.out == b.out && !a.out.empty()) {
        ++identical;
      } else if (first_diff.empty()) {
        first_diff = std::string(sub) + " " + name + " --format " + fmt;
      }
    }
  }
  Outcome o;
  o.pass = identical == total;
  o.detail = (Detail() << identical << "/" << total << " runs byte-identical across two invocations"
                       << (first_diff.empty() ? "" : " (first difference: " + first_diff + ")"))
                 .str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: vbm_acceptance <vbm binary> <problems dir>\n";
    return 2;
  }
  const std::string vbm_bin = argv[1], problems = argv[2];
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10,
      [&] { return criterion11(vbm_bin, problems); },
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << '\n'
              << std::flush;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
