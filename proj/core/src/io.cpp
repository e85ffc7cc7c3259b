#include "vbm/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vbm/error.hpp"

#ifndef VBM_VERSION
#define VBM_VERSION "0.0.0"
#endif

namespace vbm::io {

std::string_view version() noexcept { return VBM_VERSION; }

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& msg) {
  throw Error(ErrorCode::InvalidInput, what + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.is_object()) bad(what, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(what, std::string("missing key \"") + key + "\"");
  return *it;
}

const json* optional_key(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::size_t count_from_json(const json& j, const std::string& what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) bad(what, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) bad(what, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::string string_from_json(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> strings_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "expected a nonempty array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(string_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

// A scalar tolerance means the same value in every component.
Vec tol_from_json(const json& j, std::size_t n, const std::string& what) {
  if (j.is_number()) return Vec(n, number_from_json(j, what));
  Vec v = vec_from_json(j, what);
  if (v.size() != n) bad(what, "expected " + std::to_string(n) + " entries");
  return v;
}

template <class F>
auto with_context(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidInput) throw;
    throw Error(e.code(), what + ": " + e.what());
  }
}

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    bad(source, std::string("malformed JSON (") + e.what() + ")");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void check_format_version(const json& j) {
  if (const json* v = optional_key(j, "format_version")) {
    if (!v->is_number_integer() || v->get<int>() != kFormatVersion) {
      bad("format_version", "unsupported (this build reads version " +
                                std::to_string(kFormatVersion) + ")");
    }
  }
}

double number_from_json(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what, "expected a finite number");
  return v;
}

Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what, "expected an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = number_from_json(j[i], what + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "expected a nonempty array of rows");
  const std::size_t n = j.size();
  if (n > kMaxDim) bad(what, "matrices are limited to 8x8");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Vec r = vec_from_json(j[i], what + "[" + std::to_string(i) + "]");
    if (r.size() != n) bad(what, "matrix must be square (" + std::to_string(n) + " rows)");
    rows.push_back(r.values());
  }
  return Matrix::from_rows(rows);
}

std::vector<Vec> points_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what, "expected an array of points");
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < j.size(); ++i)
    pts.push_back(vec_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return pts;
}

json to_json(const Vec& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (const auto& r : m.rows()) a.push_back(to_json(Vec(r)));
  return a;
}

json to_json(const std::vector<Vec>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

// ---------------------------------------------------------------------------
// matops

json to_json(const matops::SpectralRadius& r) {
  json j;
  j["estimate"] = r.value;
  j["unbounded"] = r.unbounded;
  j["doublings"] = r.doublings;
  j["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
  j["cross_check_ok"] = r.cross_check_ok;
  return j;
}

json to_json(const matops::ConvergenceVerdict& v) {
  json j;
  j["value"] = v.convergent;
  j["marginal"] = v.marginal;
  j["spectral_radius"] = v.spectral_radius;
  j["power"] = v.power;
  j["power_max_entry"] = std::isfinite(v.power_max_entry) ? json(v.power_max_entry) : json(nullptr);
  j["diverging"] = v.diverging;
  j["reason"] = v.reason;
  return j;
}

json to_json(const matops::MatClassReport& r) {
  json j;
  j["matrix"] = to_json(r.matrix);
  j["n"] = r.matrix.dim();
  j["tol"] = r.tol;
  j["spectral_radius"] = to_json(r.spectral_radius);
  j["positive"] = r.positive;
  if (r.convergent_to_zero) {
    j["convergent_to_zero"] = to_json(*r.convergent_to_zero);
  } else {
    j["convergent_to_zero"] = json{{"value", nullptr},
                                   {"reason", "only defined for nonnegative matrices"}};
  }
  json ip;
  ip["value"] = r.inverse_positive.inverse_positive;
  ip["inverse"] = r.inverse_positive.inverse ? to_json(*r.inverse_positive.inverse) : json(nullptr);
  ip["min_inverse_entry"] = r.inverse_positive.min_inverse_entry;
  ip["reason"] = r.inverse_positive.reason;
  j["inverse_positive"] = ip;
  if (r.splitting) {
    json s;
    s["s"] = r.splitting->s;
    s["mbar"] = to_json(r.splitting->mbar);
    s["mbar_spectral_radius"] = r.splitting->mbar_radius;
    s["certified"] = r.splitting->certified;
    j["splitting"] = s;
  } else {
    j["splitting"] = nullptr;
  }
  j["b_class"] = matops::to_string(matops::b_class(r.matrix, r.tol));
  return j;
}

// ---------------------------------------------------------------------------
// metric

metric::MetricSpec metric_from_json(const json& j) {
  const std::string what = "metric";
  const std::string kind_s = string_from_json(require(j, "kind", what), what + ".kind");
  const auto kind = metric::parse_kind(kind_s);
  if (!kind) bad(what + ".kind", "unknown kind \"" + kind_s + "\"");

  metric::MetricSpec spec;
  switch (*kind) {
    case metric::MetricKind::example1: spec = metric::example1(); break;
    case metric::MetricKind::example2: spec = metric::example2(); break;
    case metric::MetricKind::componentwise_abs: {
      const std::size_t m = count_from_json(require(j, "m", what), what + ".m");
      const json* B = optional_key(j, "B");
      spec = with_context(what, [&] {
        return metric::componentwise_abs(
            m, B ? matrix_from_json(*B, what + ".B") : Matrix::identity(m));
      });
      break;
    }
    case metric::MetricKind::expression: {
      const auto comps = strings_from_json(require(j, "components", what), what + ".components");
      const std::size_t m = count_from_json(require(j, "m", what), what + ".m");
      const Matrix B = matrix_from_json(require(j, "B", what), what + ".B");
      spec = with_context(what, [&] { return metric::from_expressions(comps, m, B); });
      break;
    }
  }
  if (*kind == metric::MetricKind::example1 || *kind == metric::MetricKind::example2) {
    if (const json* B = optional_key(j, "B")) {
      spec = with_context(what, [&] { return metric::with_matrix(spec, matrix_from_json(*B, what + ".B")); });
    }
  }
  if (const json* n = optional_key(j, "n")) {
    if (count_from_json(*n, what + ".n") != spec.n) bad(what + ".n", "does not match the metric");
  }
  if (const json* m = optional_key(j, "m")) {
    if (count_from_json(*m, what + ".m") != spec.m) bad(what + ".m", "does not match the metric");
  }
  if (const json* c = optional_key(j, "scale")) {
    const double s = number_from_json(*c, what + ".scale");
    if (!(s > 0.0)) bad(what + ".scale", "must be positive");
    spec = metric::scaled(spec, s);
  }
  if (const json* bc = optional_key(j, "B_class")) {
    const std::string s = string_from_json(*bc, what + ".B_class");
    const auto claimed = matops::parse_bclass(s);
    if (!claimed) bad(what + ".B_class", "unknown class \"" + s + "\"");
    if (*claimed != spec.b_class) {
      bad(what + ".B_class", "declared " + s + " but B is " + matops::to_string(spec.b_class));
    }
  }
  return spec;
}

json to_json(const metric::MetricSpec& s) {
  json j;
  j["kind"] = metric::to_string(s.kind);
  j["n"] = s.n;
  j["m"] = s.m;
  if (s.kind == metric::MetricKind::expression) j["components"] = s.sources;
  j["B"] = to_json(s.B);
  j["B_class"] = matops::to_string(s.b_class);
  if (s.scale != 1.0) j["scale"] = s.scale;
  return j;
}

json to_json(const metric::ViolationReport& r) {
  json j;
  j["ok"] = r.ok();
  j["sampler"] = r.sampler;
  j["sample_size"] = r.sample_size;
  j["subsampled"] = r.subsampled;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["checked"] = json{{"positivity", r.checked.positivity},
                      {"identity", r.checked.identity},
                      {"symmetry", r.checked.symmetry},
                      {"triangle", r.checked.triangle}};
  j["violation_count"] = r.violation_count;
  json vs = json::array();
  for (const auto& v : r.violations) {
    json w;
    w["axiom"] = metric::to_string(v.axiom);
    w["indices"] = v.indices;
    w["points"] = to_json(v.points);
    w["lhs"] = to_json(v.lhs);
    w["rhs"] = to_json(v.rhs);
    w["margin"] = std::isfinite(v.margin) ? json(v.margin) : json(nullptr);
    w["note"] = v.note;
    vs.push_back(std::move(w));
  }
  j["violations"] = std::move(vs);
  return j;
}

// ---------------------------------------------------------------------------
// solver problems

solver::ContractionProblem contraction_from_json(const json& j) {
  solver::ContractionProblem p;
  p.metric = metric_from_json(require(j, "metric", "problem"));
  const std::size_t m = p.metric.m;
  p.N = with_context("operator", [&] {
    return solver::Operator::from_expressions(
        strings_from_json(require(j, "operator", "problem"), "operator"), m);
  });
  p.A = matrix_from_json(require(j, "A", "problem"), "A");
  p.x0 = vec_from_json(require(j, "x0", "problem"), "x0");
  if (p.x0.size() != m) bad("x0", "expected " + std::to_string(m) + " entries");
  p.tol = tol_from_json(require(j, "tol", "problem"), p.metric.n, "tol");
  if (const json* mi = optional_key(j, "max_iter")) p.max_iter = count_from_json(*mi, "max_iter");
  if (const json* ct = optional_key(j, "check_tol")) p.check_tol = number_from_json(*ct, "check_tol");
  return p;
}

solver::MaiaProblem maia_from_json(const json& j) {
  solver::MaiaProblem p;
  p.d1 = metric_from_json(require(j, "metric", "problem"));
  p.d2 = metric_from_json(require(j, "metric2", "problem"));
  const std::size_t m = p.d2.m;
  p.N = with_context("operator", [&] {
    return solver::Operator::from_expressions(
        strings_from_json(require(j, "operator", "problem"), "operator"), m);
  });
  p.C = matrix_from_json(require(j, "C", "problem"), "C");
  p.A = matrix_from_json(require(j, "A", "problem"), "A");
  p.x0 = vec_from_json(require(j, "x0", "problem"), "x0");
  if (p.x0.size() != m) bad("x0", "expected " + std::to_string(m) + " entries");
  p.tol = tol_from_json(require(j, "tol", "problem"), p.d2.n, "tol");
  if (const json* mi = optional_key(j, "max_iter")) p.max_iter = count_from_json(*mi, "max_iter");
  if (const json* ct = optional_key(j, "check_tol")) p.check_tol = number_from_json(*ct, "check_tol");
  return p;
}

solver::AvramescuProblem avramescu_from_json(const json& j) {
  solver::AvramescuProblem p;
  p.metric = metric_from_json(require(j, "metric", "problem"));
  const std::size_t m = p.metric.m;
  const json& box = require(j, "Dbox", "problem");
  if (!box.is_array() || box.empty()) bad("Dbox", "expected an array of [lo, hi] pairs");
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Vec b = vec_from_json(box[i], "Dbox[" + std::to_string(i) + "]");
    if (b.size() != 2) bad("Dbox", "each entry must be [lo, hi]");
    p.dbox.emplace_back(b[0], b[1]);
  }
  const std::size_t q = p.dbox.size();
  p.N1 = with_context("operator", [&] {
    return solver::Operator::from_expressions(
        strings_from_json(require(j, "operator", "problem"), "operator"), m, q);
  });
  p.N2 = with_context("operator2", [&] {
    return solver::Operator::from_expressions(
        strings_from_json(require(j, "operator2", "problem"), "operator2"), m, q);
  });
  p.A = matrix_from_json(require(j, "A", "problem"), "A");
  p.x0 = vec_from_json(require(j, "x0", "problem"), "x0");
  if (p.x0.size() != m) bad("x0", "expected " + std::to_string(m) + " entries");
  p.inner_tol = tol_from_json(require(j, "tol", "problem"), p.metric.n, "tol");
  if (const json* v = optional_key(j, "max_iter")) p.max_iter = count_from_json(*v, "max_iter");
  if (const json* v = optional_key(j, "grid")) p.grid = count_from_json(*v, "grid");
  if (const json* v = optional_key(j, "refine_iters")) p.refine_iters = count_from_json(*v, "refine_iters");
  if (const json* v = optional_key(j, "lambda")) p.lambda = number_from_json(*v, "lambda");
  if (const json* v = optional_key(j, "outer_tol")) p.outer_tol = number_from_json(*v, "outer_tol");
  if (const json* v = optional_key(j, "samples")) p.samples = count_from_json(*v, "samples");
  if (const json* v = optional_key(j, "x_radius")) p.x_radius = number_from_json(*v, "x_radius");
  if (const json* v = optional_key(j, "check_tol")) p.check_tol = number_from_json(*v, "check_tol");
  return p;
}

solver::Schedule schedule_from_json(const json& j, std::size_t m) {
  const std::string what = "perturbations";
  const std::string type = string_from_json(require(j, "type", what), what + ".type");
  if (type == "zero") return solver::Schedule::zero(m);
  if (type == "geometric") {
    const double c = number_from_json(require(j, "c", what), what + ".c");
    const double r = number_from_json(require(j, "ratio", what), what + ".ratio");
    return with_context(what, [&] { return solver::Schedule::geometric(m, c, r); });
  }
  if (type == "constant") {
    return solver::Schedule::constant(m, number_from_json(require(j, "c", what), what + ".c"));
  }
  if (type == "list") {
    auto offs = points_from_json(require(j, "values", what), what + ".values");
    for (const auto& o : offs)
      if (o.size() != m) bad(what + ".values", "offsets must have " + std::to_string(m) + " entries");
    return solver::Schedule::list(std::move(offs));
  }
  bad(what + ".type", "expected zero, geometric, constant or list");
}

// ---------------------------------------------------------------------------
// solver results

json to_json(const solver::Certificate& c) {
  json j;
  j["bound_valid"] = c.bound_valid;
  j["case"] = c.bound_case ? json(solver::to_string(*c.bound_case)) : json(nullptr);
  j["case_a_valid"] = c.case_a_valid;
  j["case_b_valid"] = c.case_b_valid;
  j["phi_a"] = c.phi_a ? to_json(*c.phi_a) : json(nullptr);
  j["phi_b"] = c.phi_b ? to_json(*c.phi_b) : json(nullptr);
  j["d01"] = to_json(c.d01);
  if (!c.note.empty()) j["note"] = c.note;
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back(json{{"k", r.k},
                        {"bound", r.bound.empty() ? json(nullptr) : to_json(r.bound)},
                        {"residual", to_json(r.residual)}});
  }
  j["table"] = std::move(rows);
  return j;
}

json to_json(const solver::Witness& w) {
  return json{{"k", w.k},
              {"where", w.where},
              {"points", to_json(w.points)},
              {"lhs", to_json(w.lhs)},
              {"rhs", to_json(w.rhs)}};
}

json to_json(const solver::FixedPointResult& r) {
  json j;
  j["status"] = solver::to_string(r.status);
  j["message"] = r.message;
  j["x_star"] = to_json(r.x_star);
  j["iterations"] = r.iterations;
  j["final_residual"] = to_json(r.final_residual);
  j["unique"] = r.unique;
  j["stopping_metric"] = r.stopping_metric;
  j["empirical_contraction_ok"] = r.empirical_contraction_ok;
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  if (r.d1_residual) j["d1_residual"] = to_json(*r.d1_residual);
  if (r.d1_bound) j["d1_bound"] = to_json(*r.d1_bound);
  j["orbit_tail"] = to_json(r.orbit_tail);
  j["certificate"] = to_json(r.certificate);
  return j;
}

json to_json(const solver::RzReport& r) {
  json j;
  j["case"] = solver::to_string(r.bound_case);
  j["phi"] = to_json(r.phi);
  j["x_star"] = to_json(r.x_star);
  j["bound_holds"] = r.bound_holds;
  j["residual_vanishes"] = r.residual_vanishes;
  j["converges"] = r.converges;
  if (!r.note.empty()) j["note"] = r.note;
  json rows = json::array();
  for (const auto& w : r.rows) {
    rows.push_back(json{{"k", w.k},
                        {"x", to_json(w.x)},
                        {"residual", to_json(w.residual)},
                        {"bound", to_json(w.bound)},
                        {"error", to_json(w.error)},
                        {"holds", w.holds}});
  }
  j["table"] = std::move(rows);
  return j;
}

json to_json(const solver::OstrowskiReport& r) {
  json j;
  j["case"] = solver::to_string(r.bound_case);
  j["b_tilde"] = r.b_tilde;
  j["schedule"] = r.schedule;
  j["x_star"] = to_json(r.x_star);
  j["majorant_holds"] = r.majorant_holds;
  j["schedule_vanishing"] = r.schedule_vanishing;
  j["converges"] = r.converges;
  j["stagnation_bound"] = to_json(r.stagnation_bound);
  if (!r.note.empty()) j["note"] = r.note;
  json rows = json::array();
  for (const auto& w : r.rows) {
    rows.push_back(json{{"k", w.k},
                        {"x", to_json(w.x)},
                        {"delta", to_json(w.delta)},
                        {"error", to_json(w.error)},
                        {"majorant", to_json(w.majorant)},
                        {"holds", w.holds}});
  }
  j["table"] = std::move(rows);
  return j;
}

json to_json(const solver::AvramescuResult& r) {
  json j;
  j["status"] = solver::to_string(r.status);
  j["message"] = r.message;
  j["x_star"] = to_json(r.x_star);
  j["y_star"] = to_json(r.y_star);
  j["residual_x"] = r.residual_x;
  j["residual_y"] = r.residual_y;
  j["grid_points"] = r.grid_points;
  j["refine_steps"] = r.refine_steps;
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  json c;
  c["case"] = solver::to_string(r.continuity.bound_case);
  c["phi"] = to_json(r.continuity.phi);
  c["checked"] = r.continuity.checked;
  c["failures"] = r.continuity.failures;
  json shown = json::array();
  for (const auto& s : r.continuity.shown) {
    shown.push_back(json{{"y", to_json(s.y)},
                         {"ybar", to_json(s.ybar)},
                         {"lhs", to_json(s.lhs)},
                         {"rhs", to_json(s.rhs)},
                         {"holds", s.holds}});
  }
  c["samples"] = std::move(shown);
  j["continuity"] = std::move(c);
  return j;
}

// ---------------------------------------------------------------------------
// evp

evp::FiniteSpace space_from_json(const json& j) {
  const std::string what = "space";
  if (const json* dist = optional_key(j, "dist")) {
    const Matrix B = matrix_from_json(require(j, "B", what), what + ".B");
    if (!dist->is_array()) bad(what + ".dist", "expected a 3-d array");
    const std::size_t np = dist->size();
    std::vector<std::string> labels;
    if (const json* l = optional_key(j, "points")) {
      for (std::size_t i = 0; i < l->size(); ++i) {
        const json& e = (*l)[i];
        labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
      }
      if (labels.size() != np) bad(what + ".points", "one label per row of dist");
    } else {
      for (std::size_t i = 0; i < np; ++i) labels.push_back(std::to_string(i));
    }
    std::vector<std::vector<Vec>> d(np);
    for (std::size_t i = 0; i < np; ++i) {
      const std::string wi = what + ".dist[" + std::to_string(i) + "]";
      d[i] = points_from_json((*dist)[i], wi);
    }
    return with_context(what, [&] { return evp::FiniteSpace(labels, d, B); });
  }
  const metric::MetricSpec spec = metric_from_json(require(j, "metric", what));
  const auto coords = points_from_json(require(j, "coords", what), what + ".coords");
  std::vector<std::string> labels;
  if (const json* l = optional_key(j, "points")) {
    for (std::size_t i = 0; i < l->size(); ++i) {
      const json& e = (*l)[i];
      labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    }
  }
  return with_context(what, [&] { return evp::FiniteSpace::from_metric(spec, coords, labels); });
}

EvpInput evp_from_json(const json& j) {
  evp::FiniteSpace space = space_from_json(require(j, "space", "problem"));
  std::vector<Vec> f;
  if (const json* ft = optional_key(j, "f")) {
    f = points_from_json(*ft, "f");
  } else if (const json* fe = optional_key(j, "f_expr")) {
    if (space.coords().empty()) bad("f_expr", "needs a space given by coordinates");
    const std::size_t m = space.coords().front().size();
    const auto op = with_context("f_expr", [&] {
      return solver::Operator::from_expressions(strings_from_json(*fe, "f_expr"), m);
    });
    if (op.out_dim() != space.n()) bad("f_expr", "needs one expression per metric component");
    for (const auto& c : space.coords()) f.push_back(with_context("f_expr", [&] { return op(c); }));
  } else {
    bad("problem", "missing key \"f\" or \"f_expr\"");
  }
  EvpInput in{std::move(space), std::move(f), 0, {}, 1.0, 1.0, {}};
  if (const json* v = optional_key(j, "x0")) in.x0 = count_from_json(*v, "x0");
  if (const json* s = optional_key(j, "schedule")) {
    if (const json* v = optional_key(*s, "eps0")) in.schedule.eps0 = number_from_json(*v, "schedule.eps0");
    if (const json* v = optional_key(*s, "ratio")) in.schedule.ratio = number_from_json(*v, "schedule.ratio");
  }
  if (const json* v = optional_key(j, "eps")) in.eps = number_from_json(*v, "eps");
  if (const json* v = optional_key(j, "delta")) in.delta = number_from_json(*v, "delta");
  if (const json* v = optional_key(j, "N")) {
    if (!v->is_array()) bad("N", "expected an array of indices");
    for (std::size_t i = 0; i < v->size(); ++i)
      in.N.push_back(count_from_json((*v)[i], "N[" + std::to_string(i) + "]"));
    if (in.N.size() != in.space.size()) bad("N", "expected one index per point");
    for (auto x : in.N)
      if (x >= in.space.size()) bad("N", "index out of range");
  }
  if (in.f.size() != in.space.size()) bad("f", "expected one value per point");
  for (const auto& v : in.f)
    if (v.size() != in.space.n()) bad("f", "values must have n components");
  if (in.x0 >= in.space.size()) bad("x0", "index out of range");
  return in;
}

json to_json(const evp::FiniteSpace& s) {
  json j;
  j["points"] = s.labels();
  j["B"] = to_json(s.B());
  json d = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < s.size(); ++k) row.push_back(to_json(s.d(i, k)));
    d.push_back(std::move(row));
  }
  j["dist"] = std::move(d);
  return j;
}

namespace {

json witnesses(const std::vector<evp::StrictWitness>& ws) {
  json a = json::array();
  for (const auto& w : ws)
    a.push_back(json{{"x", w.x}, {"k", w.k}, {"i", w.i}, {"lhs", w.lhs}, {"rhs", w.rhs}});
  return a;
}

}  // namespace

json to_json(const evp::Conclusions& c) {
  json j;
  j["ok"] = c.ok();
  j["c1"] = json{{"holds", c.c1}, {"lhs", to_json(c.c1_lhs)}, {"rhs", to_json(c.c1_rhs)}};
  j["c2"] = json{{"holds", c.c2}, {"witnesses", witnesses(c.c2_witnesses)}};
  j["c3"] = json{{"holds", c.c3}, {"witnesses", witnesses(c.c3_witnesses)}};
  j["nested"] = c.nested;
  j["shrinking"] = c.shrinking;
  j["failures"] = c.failures;
  return j;
}

json to_json(const evp::EkelandTrace& t) {
  json j;
  j["x0"] = t.x0;
  j["x_star"] = t.x_star;
  j["metric_scale"] = t.metric_scale;
  json steps = json::array();
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    steps.push_back(json{{"k", k}, {"eps", k == 0 ? json(nullptr) : json(t.eps[k])},
                         {"x", t.x[k]}, {"F", t.F[k]}});
  }
  j["steps"] = std::move(steps);
  j["conclusions"] = to_json(t.conclusions);
  return j;
}

json to_json(const evp::StrongResult& r) {
  json j;
  j["eps"] = r.eps;
  j["delta"] = r.delta;
  j["s1"] = r.s1;
  j["s2"] = r.s2;
  j["d_star_x0"] = to_json(r.d_star_x0);
  j["trace"] = to_json(r.trace);
  return j;
}

json to_json(const evp::CaristiResult& r) {
  json j;
  j["x_star"] = r.x_star;
  j["fixed_points"] = r.fixed_points;
  j["in_fixed_point_set"] =
      std::find(r.fixed_points.begin(), r.fixed_points.end(), r.x_star) != r.fixed_points.end();
  j["trace"] = to_json(r.trace);
  return j;
}

}  // namespace vbm::io
