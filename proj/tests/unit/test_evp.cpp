#include <doctest.h>

#include <cmath>

#include "evp_instances.hpp"
#include "oracles.hpp"
#include "vbm/error.hpp"
#include "vbm/evp.hpp"
#include "vbm/metric.hpp"

using namespace vbm;
using namespace vbm::evp;
using vbm::testing::Rng;

namespace {

FiniteSpace line(std::vector<double> xs, double b = 1.0) {
  std::vector<Vec> pts;
  for (double x : xs) pts.push_back({x});
  return FiniteSpace::from_metric(metric::componentwise_abs(1, Matrix{{b}}), pts);
}

FiniteSpace from_raw(const vbm::testing::RawSpace& s) { return FiniteSpace(s.labels, s.dist, s.B); }

// Points a, b, c with d(a,b) = (1,1) and c halfway between.
FiniteSpace h_failure_space() {
  const Vec z{0, 0}, one{1, 1}, half{0.5, 0.5};
  return FiniteSpace({"a", "b", "c"}, {{z, one, half}, {one, z, half}, {half, half, z}},
                     Matrix::identity(2));
}

template <class F>
std::optional<HypothesisError> hypothesis_error(F&& f) {
  try {
    f();
  } catch (const HypothesisError& e) {
    return e;
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("evp") {

TEST_CASE("finite space validation") {
  const Vec z{0};
  CHECK_NOTHROW(FiniteSpace({"a"}, {{z}}, Matrix{{1}}));
  auto bad_sym = hypothesis_error([&] { FiniteSpace({"a", "b"}, {{z, {1}}, {{2}, z}}, Matrix{{1}}); });
  REQUIRE(bad_sym);
  CHECK(bad_sym->code() == ErrorCode::HypothesisViolated);
  auto zero = hypothesis_error([&] { FiniteSpace({"a", "b"}, {{z, z}, {z, z}}, Matrix{{1}}); });
  REQUIRE(zero);
  CHECK(zero->witness() == std::vector<std::size_t>{0, 1});
  // 0, 1, 2 with squared distances: d(0,2) = 4 > 1 + 1.
  auto tri = hypothesis_error([&] {
    FiniteSpace({"0", "1", "2"}, {{z, {1}, {4}}, {{1}, z, {1}}, {{4}, {1}, z}}, Matrix{{1}});
  });
  REQUIRE(tri);
  CHECK(tri->witness() == std::vector<std::size_t>{0, 1, 2});
  CHECK_NOTHROW(FiniteSpace({"0", "1", "2"}, {{z, {1}, {4}}, {{1}, z, {1}}, {{4}, {1}, z}}, Matrix{{2}}));
}

TEST_CASE("cantor intersection") {
  const auto s = line({0, 1, 2});
  CHECK(cantor_intersect(s, {{0, 1, 2}, {0, 1}, {0}, {0}}) == 0);
  CHECK(cantor_intersect(s, {{0, 1, 2}, {1, 2}, {2}}) == 2);
  auto c = hypothesis_error([&] { cantor_intersect(s, {{0, 1}, {0, 1}, {0, 1}}); });
  REQUIRE(c);
  CHECK(c->code() == ErrorCode::HypothesisViolated);
  try {
    cantor_intersect(s, {{0, 1}, {}});
    FAIL("expected EmptySet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySet);
  }
  try {
    cantor_intersect(s, {{0}, {0, 1}});
    FAIL("expected NotDescending");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDescending);
  }
}

TEST_CASE("(H)-points") {
  const auto s = line({0, 1, 2});
  CHECK(find_H_point(s, {{0}, {1}, {4}}, {0, 1, 2}, 0.5) == std::optional<std::size_t>(0));
  CHECK(find_H_point(s, {{4}, {1}, {0}}, {0, 1, 2}, 0.5) == std::optional<std::size_t>(2));
  const auto h = h_failure_space();
  const std::vector<Vec> f{{0, 1}, {1, 0}, {2, 2}};
  CHECK_FALSE(find_H_point(h, f, {0, 1}, 0.5).has_value());
  CHECK(find_H_point(h, f, {0, 1}, 1.5) == std::optional<std::size_t>(0));
  // Ties go to the smallest point index, not the first position in F.
  CHECK(find_H_point(h, f, {1, 0}, 1.5) == std::optional<std::size_t>(0));
}

TEST_CASE("weak principle on {0, 1, 2} with f = x^2") {
  const auto s = line({0, 1, 2});
  const std::vector<Vec> f{{0}, {1}, {4}};
  const auto t = ekeland_weak(s, f, 2);
  REQUIRE(t.x.size() == 2);
  CHECK(t.F[0] == IndexSet{0, 1, 2});
  CHECK(t.x[1] == 0);
  CHECK(t.eps[1] == 0.5);
  CHECK(t.F[1] == IndexSet{0});
  CHECK(t.x_star == 0);
  const auto& c = t.conclusions;
  CHECK(c.ok());
  CHECK(c.c1_lhs == Vec{0});
  CHECK(c.c1_rhs == Vec{2});
  REQUIRE(c.c2_witnesses.size() == 2);
  CHECK(c.c2_witnesses[0].x == 1);
  CHECK(c.c3_witnesses[1].x == 2);
  CHECK_FALSE(vbm::testing::replay_trace(t, s, f, {}, 1.0).has_value());
}

TEST_CASE("constant f stops at x0") {
  const auto s = line({0, 1, 2, 5});
  const std::vector<Vec> f(4, Vec{3});
  for (std::size_t x0 = 0; x0 < 4; ++x0) {
    const auto t = ekeland_weak(s, f, x0);
    CHECK(t.x_star == x0);
    CHECK(t.F[0] == IndexSet{x0});
    CHECK(t.conclusions.ok());
  }
}

TEST_CASE("singleton space is vacuous") {
  const auto s = line({7});
  const auto t = ekeland_weak(s, {{1}}, 0);
  CHECK(t.x_star == 0);
  CHECK(t.conclusions.ok());
  CHECK(t.conclusions.c2_witnesses.empty());
  CHECK(t.conclusions.c3_witnesses.empty());
}

TEST_CASE("condition (H) failure is reported with its step and set") {
  const auto s = h_failure_space();
  const std::vector<Vec> f{{0, 1}, {1, 0}, {2, 2}};
  auto e = hypothesis_error([&] { ekeland_weak(s, f, 2); });
  REQUIRE(e);
  CHECK(e->code() == ErrorCode::ConditionHFailed);
  CHECK(e->step() == 1);
  CHECK(e->witness() == std::vector<std::size_t>{0, 1, 2});
  CHECK_FALSE(vbm::testing::has_H_point(s, f, e->witness(), 0.5));
  // A larger first epsilon makes a the (H)-point, and F(a) = {a}.
  const auto t = ekeland_weak(s, f, 2, {3.0, 0.5});
  CHECK(t.x_star == 0);
  CHECK(t.conclusions.ok());
}

TEST_CASE("strong principle") {
  const auto s = line({0, 1, 2});
  const std::vector<Vec> f{{0}, {1}, {4}};
  const auto r0 = ekeland_strong(s, f, 0, 0.3, 0.7);
  CHECK(r0.trace.x_star == 0);
  CHECK(r0.ok());
  CHECK(r0.d_star_x0 == Vec{0});
  const auto r1 = ekeland_strong(s, f, 1, 1.0, 2.0);
  CHECK(r1.trace.x_star == 0);
  CHECK(r1.s1);
  CHECK(r1.s2);
  CHECK(r1.d_star_x0 == Vec{1});
  CHECK(r1.trace.metric_scale == 0.5);
  CHECK(r1.ok());
  auto e = hypothesis_error([&] { ekeland_strong(s, f, 2, 1.0, 1.0); });
  REQUIRE(e);
  CHECK(e->code() == ErrorCode::PreconditionCiFailed);
  CHECK(e->witness() == std::vector<std::size_t>{0});
}

TEST_CASE("strong principle properties on random scalar instances") {
  Rng rng(81);
  int runs = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> xs;
    std::vector<Vec> f;
    const std::size_t np = 2 + rng.index(12);
    for (std::size_t i = 0; i < np; ++i) {
      xs.push_back(static_cast<double>(i) + rng.uniform(0.0, 0.5));
      f.push_back({rng.uniform(0.0, 3.0)});
    }
    const auto s = line(xs);
    const std::size_t x0 = rng.index(np);
    const double eps = rng.uniform(0.5, 3.0), delta = rng.uniform(0.1, 3.0);
    double fmin = f[0][0];
    for (const auto& v : f) fmin = std::min(fmin, v[0]);
    if (f[x0][0] > fmin + eps) {
      CHECK(hypothesis_error([&] { ekeland_strong(s, f, x0, eps, delta); })->code() ==
            ErrorCode::PreconditionCiFailed);
      continue;
    }
    const auto r = ekeland_strong(s, f, x0, eps, delta);
    ++runs;
    CHECK(r.ok());
    CHECK(f[r.trace.x_star][0] <= f[x0][0]);
    CHECK(std::abs(xs[r.trace.x_star] - xs[x0]) <= delta * (1 + 1e-12));
    CHECK_FALSE(vbm::testing::replay_trace(r.trace, s, f, {}, eps / delta).has_value());
  }
  CHECK(runs > 50);
}

TEST_CASE("caristi examples") {
  const auto s = line({0, 1, 2});
  const std::vector<Vec> f{{3}, {0}, {5}};
  const auto id = caristi_solve(s, f, {0, 1, 2}, 2);
  CHECK(id.fixed_points == IndexSet{0, 1, 2});
  CHECK(id.x_star == ekeland_weak(s, f, 2).x_star);

  const auto two = line({0, 1});
  const auto r = caristi_solve(two, {{0}, {2}}, {0, 0}, 1);
  CHECK(r.x_star == 0);
  CHECK(r.fixed_points == IndexSet{0});

  auto e2 = hypothesis_error([&] { caristi_solve(two, {{0}, {0.5}}, {0, 0}, 1); });
  REQUIRE(e2);
  CHECK(e2->code() == ErrorCode::Cc2Violated);
  CHECK(e2->witness() == std::vector<std::size_t>{1});
}

TEST_CASE("caristi condition (cc1) violation") {
  // Squared distances on {0, 1, 2} with B = [2].
  const Vec z{0};
  const FiniteSpace s({"0", "1", "2"}, {{z, {1}, {4}}, {{1}, z, {1}}, {{4}, {1}, z}}, Matrix{{2}});
  // N 1 = 0: d(0, 2) = 4 > d(1, 2) + 2 d(0, 1) = 3.
  auto e = hypothesis_error([&] { caristi_solve(s, {{0}, {10}, {20}}, {0, 0, 2}, 1); });
  REQUIRE(e);
  CHECK(e->code() == ErrorCode::Cc1Violated);
  REQUIRE(e->witness().size() == 2);
  const std::size_t x = e->witness()[0], y = e->witness()[1];
  const std::vector<std::size_t> N{0, 0, 2};
  CHECK(s.d(N[x], y)[0] > s.d(x, y)[0] + 2 * s.d(N[x], x)[0]);
}

TEST_CASE("random instances: replay or a genuine failed hypothesis") {
  Rng rng(82);
  int verified = 0, invalid = 0, h_failed = 0;
  for (int t = 0; t < 120; ++t) {
    const std::size_t np = 1 + rng.index(20), n = 1 + rng.index(3);
    const auto raw = vbm::testing::random_space(rng, np, n, rng.coin(), rng.coin(0.3));
    const auto f = vbm::testing::random_f(rng, np, n, rng.coin(0.7));
    const std::size_t x0 = rng.coin() ? vbm::testing::top_point(f) : rng.index(np);
    std::optional<FiniteSpace> s;
    try {
      s.emplace(from_raw(raw));
    } catch (const HypothesisError& e) {
      ++invalid;
      CHECK(e.code() == ErrorCode::HypothesisViolated);
      CHECK(vbm::testing::witness_breaks_axiom(raw, e.witness()));
      continue;
    }
    CHECK(vbm::testing::raw_space_valid(raw));
    try {
      const auto tr = ekeland_weak(*s, f, x0);
      const auto bad = vbm::testing::replay_trace(tr, *s, f, {}, 1.0);
      CHECK_MESSAGE(!bad, *bad);
      ++verified;
    } catch (const HypothesisError& e) {
      REQUIRE(e.code() == ErrorCode::ConditionHFailed);
      ++h_failed;
      CHECK_FALSE(vbm::testing::has_H_point(*s, f, e.witness(), std::pow(0.5, e.step())));
    }
  }
  MESSAGE("verified ", verified, ", invalid ", invalid, ", (H) failed ", h_failed);
  CHECK(verified > 30);
  CHECK(invalid > 0);
  CHECK(h_failed > 0);
}

TEST_CASE("random caristi instances land in the fixed-point set") {
  Rng rng(83);
  for (int t = 0; t < 60; ++t) {
    const auto c = vbm::testing::random_caristi(rng, 1 + rng.index(25), 1 + rng.index(3));
    const FiniteSpace s(c.space.labels, c.space.dist, c.space.B);
    const auto r = caristi_solve(s, c.f, c.N, c.x0);
    CHECK(c.N[r.x_star] == r.x_star);
    IndexSet fixed;
    for (std::size_t x = 0; x < c.N.size(); ++x)
      if (c.N[x] == x) fixed.push_back(x);
    CHECK(r.fixed_points == fixed);
  }
}

TEST_CASE("scalar reduction with b = 2 on squared distances") {
  Rng rng(84);
  for (int t = 0; t < 50; ++t) {
    const std::size_t np = 2 + rng.index(15);
    std::vector<double> xs;
    std::vector<Vec> f;
    for (std::size_t i = 0; i < np; ++i) {
      xs.push_back(rng.uniform(0.0, 4.0));
      f.push_back({rng.uniform(0.0, 5.0)});
    }
    std::vector<std::vector<Vec>> dist(np, std::vector<Vec>(np, Vec(1)));
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < np; ++a) {
      labels.push_back(std::to_string(a));
      for (std::size_t b = 0; b < np; ++b) dist[a][b] = {(xs[a] - xs[b]) * (xs[a] - xs[b])};
    }
    const FiniteSpace s(labels, dist, Matrix{{2}});
    const auto tr = ekeland_weak(s, f, rng.index(np));
    const auto bad = vbm::testing::replay_trace(tr, s, f, {}, 1.0);
    CHECK_MESSAGE(!bad, *bad);
  }
}

}  // TEST_SUITE
