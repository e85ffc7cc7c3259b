#pragma once

// JSON reading and writing for matrices, metrics, problem files and reports.
// Objects keep insertion order so identical inputs give identical bytes.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbm/evp.hpp"
#include "vbm/linalg.hpp"
#include "vbm/matops.hpp"
#include "vbm/metric.hpp"
#include "vbm/solver.hpp"

namespace vbm::io {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

std::string_view version() noexcept;

// Parses text; throws Error(InvalidInput) with the parser diagnostic.
json parse_json(std::string_view text, const std::string& source);
json read_json_file(const std::string& path);

// Rejects files declaring an unknown format_version.
void check_format_version(const json& j);

// All readers throw Error(InvalidInput) naming the offending key.
double number_from_json(const json& j, const std::string& what);
Vec vec_from_json(const json& j, const std::string& what);
Matrix matrix_from_json(const json& j, const std::string& what);
std::vector<Vec> points_from_json(const json& j, const std::string& what);

json to_json(const Vec& v);
json to_json(const Matrix& m);
json to_json(const std::vector<Vec>& pts);

json to_json(const matops::SpectralRadius& r);
json to_json(const matops::ConvergenceVerdict& v);
json to_json(const matops::MatClassReport& r);

metric::MetricSpec metric_from_json(const json& j);
json to_json(const metric::MetricSpec& s);
json to_json(const metric::ViolationReport& r);

solver::ContractionProblem contraction_from_json(const json& j);
solver::MaiaProblem maia_from_json(const json& j);
solver::AvramescuProblem avramescu_from_json(const json& j);
solver::Schedule schedule_from_json(const json& j, std::size_t m);

json to_json(const solver::Certificate& c);
json to_json(const solver::Witness& w);
json to_json(const solver::FixedPointResult& r);
json to_json(const solver::RzReport& r);
json to_json(const solver::OstrowskiReport& r);
json to_json(const solver::AvramescuResult& r);

struct EvpInput {
  evp::FiniteSpace space;
  std::vector<Vec> f;
  std::size_t x0 = 0;
  evp::EpsSchedule schedule;
  double eps = 1.0;
  double delta = 1.0;
  evp::IndexSet N;
};

// {"space": {...}, "f": [[...]] | "f_expr": [...], "x0", "schedule", "eps",
// "delta", "N"}; the space is either an explicit distance tensor or a
// metric plus coordinates.
EvpInput evp_from_json(const json& j);
evp::FiniteSpace space_from_json(const json& j);

json to_json(const evp::FiniteSpace& s);
json to_json(const evp::Conclusions& c);
json to_json(const evp::EkelandTrace& t);
json to_json(const evp::StrongResult& r);
json to_json(const evp::CaristiResult& r);

}  // namespace vbm::io
