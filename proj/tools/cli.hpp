#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "vbm/error.hpp"
#include "vbm/io.hpp"

namespace vbm::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInputError = 2,
  kNoConvergence = 3,
  kHypothesisViolated = 4,
  kEvpHypothesisFailed = 5,
};

enum class Format { json, text };

struct RunConfig {
  std::string subcommand;
  std::string input;   // "-" reads stdin
  std::string output;  // empty writes stdout
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::string mode;
  Format format = Format::json;
};

// Exit code for an error raised while running a subcommand.
int exit_code_for(ErrorCode code);

// Runs one subcommand on an already parsed input document. Writes the report
// to `out` and diagnostics to `err`; returns the exit code.
int run(const RunConfig& cfg, const io::json& input, std::ostream& out,
        std::ostream& err);

// Parses argv, reads the input file and dispatches.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

// Indented key: value rendering of a report.
std::string render_text(const io::json& report);

}  // namespace vbm::cli
