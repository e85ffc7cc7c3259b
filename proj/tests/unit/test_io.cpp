#include <doctest.h>

#include "vbm/error.hpp"
#include "vbm/io.hpp"

using namespace vbm;
using io::json;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("malformed documents") {
  CHECK(code_of([] { io::parse_json("{\"a\": ", "t"); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { io::read_json_file("/nonexistent/problem.json"); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { io::check_format_version(json{{"format_version", 2}}); }) ==
        ErrorCode::InvalidInput);
  CHECK_NOTHROW(io::check_format_version(json{{"format_version", 1}}));
  CHECK_NOTHROW(io::check_format_version(json::object()));
}

TEST_CASE("numbers, vectors and matrices") {
  CHECK(io::vec_from_json(json::parse("[1, 2.5]"), "v") == Vec{1, 2.5});
  CHECK(code_of([] { io::vec_from_json(json::parse("[1, \"x\"]"), "v"); }) == ErrorCode::InvalidInput);
  CHECK(io::matrix_from_json(json::parse("[[2, -1], [0, 1]]"), "m") == Matrix{{2, -1}, {0, 1}});
  CHECK(code_of([] { io::matrix_from_json(json::parse("[[1, 2], [3]]"), "m"); }) != ErrorCode::InternalError);
  CHECK(code_of([] { io::matrix_from_json(json::parse("[]"), "m"); }) == ErrorCode::InvalidInput);
  const Matrix m{{0.1, 0.2}, {0.3, 0.4}};
  CHECK(io::matrix_from_json(io::to_json(m), "m") == m);
  CHECK(io::vec_from_json(io::to_json(Vec{1e-300, -3}), "v") == Vec{1e-300, -3});
}

TEST_CASE("metric specs") {
  const auto e1 = io::metric_from_json(json{{"kind", "example1"}});
  CHECK(e1.n == 2);
  CHECK(e1.B == Matrix{{2, -1}, {0, 1}});
  const auto again = io::metric_from_json(io::to_json(e1));
  CHECK(again.B == e1.B);
  CHECK(again.kind == e1.kind);
  const auto expr = io::metric_from_json(json::parse(
      R"j({"kind": "expression", "m": 1, "components": ["abs(u1 - v1)"], "B": [[1]]})j"));
  CHECK(expr.n == 1);
  CHECK(code_of([] { io::metric_from_json(json{{"kind", "taxicab"}}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          io::metric_from_json(json::parse(R"j({"kind": "example1", "B_class": "positive"})j"));
        }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          io::metric_from_json(json::parse(
              R"j({"kind": "expression", "m": 1, "components": ["abs(u1 - "], "B": [[1]]})j"));
        }) == ErrorCode::SyntaxError);
}

TEST_CASE("finite spaces from tables and from metrics") {
  const auto table = io::space_from_json(json::parse(R"j({
    "points": ["0", "1", "2"], "B": [[1]],
    "dist": [[[0], [1], [2]], [[1], [0], [1]], [[2], [1], [0]]]})j"));
  const auto gen = io::space_from_json(json::parse(R"j({
    "metric": {"kind": "componentwise_abs", "m": 1, "B": [[1]]},
    "coords": [[0], [1], [2]]})j"));
  REQUIRE(table.size() == 3);
  REQUIRE(gen.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(table.d(i, j) == gen.d(i, j));
  CHECK(code_of([] {
          io::space_from_json(json::parse(R"j({"points": ["a"], "B": [[1]], "dist": [[[1]]]})j"));
        }) == ErrorCode::HypothesisViolated);
}

TEST_CASE("ekeland inputs") {
  const auto e = io::evp_from_json(json::parse(R"j({
    "space": {"metric": {"kind": "componentwise_abs", "m": 1}, "coords": [[0], [1], [2]]},
    "f_expr": ["x1^2"], "x0": 2, "schedule": {"eps0": 2, "ratio": 0.25}})j"));
  CHECK(e.f == std::vector<Vec>{{0}, {1}, {4}});
  CHECK(e.x0 == 2);
  CHECK(e.schedule.eps0 == 2);
  CHECK(e.schedule.ratio == 0.25);
  CHECK(code_of([] {
          io::evp_from_json(json::parse(R"j({
            "space": {"points": ["a"], "B": [[1]], "dist": [[[0]]]}, "f": [[0]], "x0": 3})j"));
        }) == ErrorCode::InvalidInput);
}

TEST_CASE("trace serialization lists every set") {
  const auto e = io::evp_from_json(json::parse(R"j({
    "space": {"metric": {"kind": "componentwise_abs", "m": 1}, "coords": [[0], [1], [2]]},
    "f": [[0], [1], [4]], "x0": 2})j"));
  const auto j = io::to_json(evp::ekeland_weak(e.space, e.f, e.x0, e.schedule));
  CHECK(j["x_star"] == 0);
  REQUIRE(j["steps"].size() == 2);
  CHECK(j["steps"][0]["F"] == json::parse("[0, 1, 2]"));
  CHECK(j["steps"][0]["eps"].is_null());
  CHECK(j["steps"][1]["x"] == 0);
  CHECK(j["steps"][1]["eps"] == 0.5);
}

}  // TEST_SUITE
