#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "vbm/error.hpp"

namespace vbm::cli {

using io::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnboundVariable:
    case ErrorCode::DomainError:
    case ErrorCode::EvalError:
    case ErrorCode::DimensionUnsupported:
    case ErrorCode::NotZPattern:
      return kInputError;
    case ErrorCode::NoFixedPointFound:
      return kNoConvergence;
    case ErrorCode::NotNonnegative:
    case ErrorCode::NotPositive:
    case ErrorCode::NotConvergent:
    case ErrorCode::CertificationFailed:
    case ErrorCode::BClassUnsupported:
    case ErrorCode::ContractionViolated:
    case ErrorCode::GraphConditionViolated:
    case ErrorCode::SubordinationViolated:
    case ErrorCode::ConclusionViolated:
      return kHypothesisViolated;
    case ErrorCode::EmptySet:
    case ErrorCode::NotDescending:
    case ErrorCode::HypothesisViolated:
    case ErrorCode::ConditionHFailed:
    case ErrorCode::PreconditionCiFailed:
    case ErrorCode::Cc1Violated:
    case ErrorCode::Cc2Violated:
    case ErrorCode::NoFixedPoint:
      return kEvpHypothesisFailed;
    case ErrorCode::InternalError:
      break;
  }
  return kInternal;
}

namespace {

int status_exit(solver::SolveStatus s) {
  switch (s) {
    case solver::SolveStatus::converged: return kOk;
    case solver::SolveStatus::max_iter_exceeded:
    case solver::SolveStatus::no_fixed_point_found: return kNoConvergence;
    case solver::SolveStatus::contraction_violated:
    case solver::SolveStatus::graph_condition_violated:
    case solver::SolveStatus::subordination_violated: return kHypothesisViolated;
  }
  return kInternal;
}

json header(const RunConfig& cfg, const std::string& mode) {
  json h;
  h["tool"] = "vbm";
  h["version"] = std::string(io::version());
  h["format_version"] = io::kFormatVersion;
  h["command"] = cfg.subcommand;
  if (!mode.empty()) h["mode"] = mode;
  h["seed"] = cfg.seed;
  h["tol_override"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
  if (cfg.samples) h["samples"] = *cfg.samples;
  return h;
}

std::string mode_or(const RunConfig& cfg, const json& in, const std::string& fallback) {
  if (!cfg.mode.empty()) return cfg.mode;
  if (in.is_object()) {
    auto it = in.find("mode");
    if (it != in.end() && it->is_string()) return it->get<std::string>();
  }
  return fallback;
}

[[noreturn]] void bad_mode(const std::string& cmd, const std::string& mode,
                           const std::string& allowed) {
  throw Error(ErrorCode::InvalidInput,
              cmd + ": unknown mode \"" + mode + "\" (expected " + allowed + ")");
}

const json* find_key(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::pair<double, double> box_from(const json& in, const char* key) {
  if (const json* b = find_key(in, key)) {
    const Vec v = io::vec_from_json(*b, key);
    if (v.size() != 2 || !(v[0] < v[1])) {
      throw Error(ErrorCode::InvalidInput, std::string(key) + ": expected [lo, hi] with lo < hi");
    }
    return {v[0], v[1]};
  }
  return {-10.0, 10.0};
}

std::size_t samples_from(const RunConfig& cfg, const json& in, std::size_t fallback) {
  if (cfg.samples) return *cfg.samples;
  if (const json* s = find_key(in, "samples")) {
    if (!s->is_number_unsigned()) throw Error(ErrorCode::InvalidInput, "samples: expected a nonnegative integer");
    return s->get<std::size_t>();
  }
  return fallback;
}

// Points for hypothesis checks: the file's "sample" or seeded draws from
// "sample_box" (default [-10, 10]^m).
std::vector<Vec> sample_points(const RunConfig& cfg, const json& in, std::size_t m) {
  if (const json* s = find_key(in, "sample")) {
    auto pts = io::points_from_json(*s, "sample");
    for (const auto& p : pts)
      if (p.size() != m) throw Error(ErrorCode::InvalidInput, "sample: points must have " + std::to_string(m) + " entries");
    return pts;
  }
  const auto [lo, hi] = box_from(in, "sample_box");
  return metric::sample_box(m, samples_from(cfg, in, 200), lo, hi, cfg.seed);
}

void apply_tol(const RunConfig& cfg, Vec& tol) {
  if (cfg.tol) tol = Vec(tol.size(), *cfg.tol);
}

int cmd_check_matrix(const RunConfig& cfg, const json& in, json& report) {
  report = header(cfg, "");
  const json* m = in.is_array() ? &in : find_key(in, "matrix");
  if (!m) throw Error(ErrorCode::InvalidInput, "check-matrix: expected a matrix or {\"matrix\": ...}");
  const Matrix M = io::matrix_from_json(*m, "matrix");
  report["result"] = io::to_json(matops::classify(M, cfg.tol.value_or(kDefaultTol)));
  return kOk;
}

int cmd_verify_metric(const RunConfig& cfg, const json& in, json& report) {
  const json* mj = find_key(in, "metric");
  const metric::MetricSpec spec = io::metric_from_json(mj ? *mj : in);
  const double tol = cfg.tol.value_or(kDefaultTol);
  metric::ViolationReport r;
  std::string mode;
  if (const json* pts = find_key(in, "points")) {
    mode = "points";
    auto points = io::points_from_json(*pts, "points");
    for (const auto& p : points)
      if (p.size() != spec.m) throw Error(ErrorCode::InvalidInput, "points: expected " + std::to_string(spec.m) + " coordinates");
    r = metric::verify_axioms(spec, points, tol, cfg.seed);
  } else {
    mode = "triples";
    const auto [lo, hi] = box_from(in, "box");
    r = metric::verify_random_triples(spec, samples_from(cfg, in, 10000), lo, hi, cfg.seed, tol);
  }
  report = header(cfg, mode);
  report["metric"] = io::to_json(spec);
  report["result"] = io::to_json(r);
  return r.ok() ? kOk : kHypothesisViolated;
}

int cmd_solve(const RunConfig& cfg, const json& in, json& report) {
  const std::string mode = mode_or(cfg, in, "perov");
  report = header(cfg, mode);
  if (mode == "perov" || mode == "graph") {
    auto p = io::contraction_from_json(in);
    apply_tol(cfg, p.tol);
    report["problem"] = json{{"operator", p.N.sources()},
                             {"metric", io::to_json(p.metric)},
                             {"A", io::to_json(p.A)},
                             {"x0", io::to_json(p.x0)},
                             {"tol", io::to_json(p.tol)},
                             {"max_iter", p.max_iter}};
    const auto r = mode == "perov" ? solver::perov_solve(p)
                                   : solver::graph_solve(p, sample_points(cfg, in, p.metric.m));
    report["result"] = io::to_json(r);
    return status_exit(r.status);
  }
  if (mode == "maia") {
    auto p = io::maia_from_json(in);
    apply_tol(cfg, p.tol);
    report["problem"] = json{{"operator", p.N.sources()},
                             {"d1", io::to_json(p.d1)},
                             {"d2", io::to_json(p.d2)},
                             {"C", io::to_json(p.C)},
                             {"A", io::to_json(p.A)},
                             {"x0", io::to_json(p.x0)},
                             {"tol", io::to_json(p.tol)},
                             {"max_iter", p.max_iter}};
    const auto r = solver::maia_solve(p, sample_points(cfg, in, p.d2.m));
    report["result"] = io::to_json(r);
    return status_exit(r.status);
  }
  if (mode == "avramescu") {
    auto p = io::avramescu_from_json(in);
    apply_tol(cfg, p.inner_tol);
    p.seed = cfg.seed;
    if (cfg.samples) p.samples = *cfg.samples;
    report["problem"] = json{{"operator", p.N1.sources()},
                             {"operator2", p.N2.sources()},
                             {"metric", io::to_json(p.metric)},
                             {"A", io::to_json(p.A)},
                             {"x0", io::to_json(p.x0)},
                             {"tol", io::to_json(p.inner_tol)},
                             {"grid", p.grid},
                             {"samples", p.samples}};
    const auto r = solver::avramescu_solve(p);
    report["result"] = io::to_json(r);
    if (!r.ok()) return status_exit(r.status);
    return r.continuity.failures == 0 ? kOk : kHypothesisViolated;
  }
  bad_mode("solve", mode, "perov, graph, maia or avramescu");
}

int cmd_stability(const RunConfig& cfg, const json& in, json& report) {
  const std::string mode = mode_or(cfg, in, "rz");
  report = header(cfg, mode);
  auto p = io::contraction_from_json(in);
  apply_tol(cfg, p.tol);
  if (mode == "rz") {
    std::vector<Vec> seq;
    if (const json* s = find_key(in, "sequence")) {
      seq = io::points_from_json(*s, "sequence");
      for (const auto& x : seq)
        if (x.size() != p.metric.m) throw Error(ErrorCode::InvalidInput, "sequence: wrong point dimension");
    }
    const auto r = solver::rz_stability_check(p, seq);
    report["result"] = io::to_json(r);
    if (!r.bound_holds) return kHypothesisViolated;
    return r.converges ? kOk : kNoConvergence;
  }
  if (mode == "ostrowski") {
    const json* s = find_key(in, "perturbations");
    const auto schedule = s ? io::schedule_from_json(*s, p.metric.m) : solver::Schedule::zero(p.metric.m);
    const auto r = solver::ostrowski_run(p, schedule);
    report["result"] = io::to_json(r);
    if (!r.majorant_holds) return kHypothesisViolated;
    return r.converges ? kOk : kNoConvergence;
  }
  bad_mode("stability", mode, "rz or ostrowski");
}

int cmd_ekeland(const RunConfig& cfg, const json& in, json& report) {
  const std::string mode = mode_or(cfg, in, "weak");
  report = header(cfg, mode);
  const io::EvpInput e = io::evp_from_json(in);
  report["space"] = io::to_json(e.space);
  report["schedule"] = json{{"eps0", e.schedule.eps0}, {"ratio", e.schedule.ratio}};
  if (mode == "weak") {
    const auto t = evp::ekeland_weak(e.space, e.f, e.x0, e.schedule);
    report["result"] = io::to_json(t);
    return t.conclusions.ok() ? kOk : kHypothesisViolated;
  }
  if (mode == "strong") {
    const auto r = evp::ekeland_strong(e.space, e.f, e.x0, e.eps, e.delta, e.schedule);
    report["result"] = io::to_json(r);
    return r.ok() ? kOk : kHypothesisViolated;
  }
  if (mode == "caristi") {
    if (e.N.empty()) throw Error(ErrorCode::InvalidInput, "N: required in caristi mode");
    const auto r = evp::caristi_solve(e.space, e.f, e.N, e.x0, e.schedule);
    report["result"] = io::to_json(r);
    return kOk;
  }
  bad_mode("ekeland", mode, "weak, strong or caristi");
}

void render(const json& j, const std::string& indent, std::ostream& os);

bool is_flat(const json& j) {
  if (!j.is_array()) return !j.is_object();
  for (const auto& e : j)
    if (e.is_object() || (e.is_array() && !is_flat(e))) return false;
  return true;
}

void render(const json& j, const std::string& indent, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (is_flat(it.value())) {
        os << indent << it.key() << ": "
           << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << '\n';
      } else {
        os << indent << it.key() << ":\n";
        render(it.value(), indent + "  ", os);
      }
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& e : j) {
      if (is_flat(e)) {
        os << indent << "- " << e.dump() << '\n';
      } else {
        os << indent << "[" << i << "]\n";
        render(e, indent + "  ", os);
      }
      ++i;
    }
  } else {
    os << indent << j.dump() << '\n';
  }
}

void emit(const RunConfig& cfg, const json& report, std::ostream& out) {
  if (cfg.format == Format::text) {
    out << render_text(report);
  } else {
    out << report.dump(2) << '\n';
  }
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  render(report, "", os);
  return os.str();
}

int run(const RunConfig& cfg, const json& input, std::ostream& out, std::ostream& err) {
  json report;
  int code = kInternal;
  try {
    io::check_format_version(input);
    if (cfg.subcommand == "check-matrix") {
      code = cmd_check_matrix(cfg, input, report);
    } else if (cfg.subcommand == "verify-metric") {
      code = cmd_verify_metric(cfg, input, report);
    } else if (cfg.subcommand == "solve") {
      code = cmd_solve(cfg, input, report);
    } else if (cfg.subcommand == "stability") {
      code = cmd_stability(cfg, input, report);
    } else if (cfg.subcommand == "ekeland") {
      code = cmd_ekeland(cfg, input, report);
    } else {
      err << "error: unknown subcommand \"" << cfg.subcommand << "\"\n";
      return kInputError;
    }
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << " (offset " << e.offset() << ")\n";
    return kInputError;
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    err << "error: " << e.what() << '\n';
    if (code == kInputError || code == kInternal) return code;
    // Hypothesis failures still produce a report naming the failure.
    if (report.is_null()) report = header(cfg, cfg.mode);
    json f;
    f["code"] = std::string(to_string(e.code()));
    f["message"] = e.what();
    if (const auto* h = dynamic_cast<const HypothesisError*>(&e)) {
      f["step"] = h->step() < 0 ? json(nullptr) : json(h->step());
      f["witness"] = h->witness();
    }
    report["failure"] = std::move(f);
  }
  emit(cfg, report, out);
  return code;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed points, certificates and variational principles in vector B-metric spaces"};
  app.set_version_flag("--version", std::string(io::version()));
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string format = "json";
  double tol = 0.0;
  std::size_t samples = 0;

  struct Sub {
    const char* name;
    const char* help;
    const char* modes;
  };
  const Sub subs[] = {
      {"check-matrix", "Classify a square matrix", nullptr},
      {"verify-metric", "Check the vector B-metric axioms on samples", nullptr},
      {"solve", "Successive approximation with error certificate", "perov|graph|maia|avramescu"},
      {"stability", "Reich-Zaslavski or perturbed-iteration stability", "rz|ostrowski"},
      {"ekeland", "Ekeland construction on a finite space", "weak|strong|caristi"},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("-i,--input", cfg.input, "Problem file (- for stdin)")->required();
    sc->add_option("-o,--output", cfg.output, "Report file (default stdout)");
    sc->add_option("--seed", cfg.seed, "Seed for sampled checks");
    sc->add_option("--tol", tol, "Tolerance override");
    sc->add_option("--samples", samples, "Sample count override");
    sc->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    if (s.modes) sc->add_option("--mode", cfg.mode, s.modes);
    apps.push_back(sc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputError;
  }

  for (CLI::App* sc : apps) {
    if (!sc->parsed()) continue;
    cfg.subcommand = sc->get_name();
    if (sc->count("--tol")) cfg.tol = tol;
    if (sc->count("--samples")) cfg.samples = samples;
  }
  cfg.format = format == "text" ? Format::text : Format::json;

  json input;
  try {
    if (cfg.input == "-") {
      std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
      input = io::parse_json(text, "stdin");
    } else {
      input = io::read_json_file(cfg.input);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (cfg.output.empty()) return run(cfg, input, out, err);
  std::ostringstream buf;
  const int code = run(cfg, input, buf, err);
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << cfg.output << '\n';
    return kInputError;
  }
  f << buf.str();
  return code;
}

}  // namespace vbm::cli
