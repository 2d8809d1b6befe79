#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polytoep/report.hpp"
#include "polytoep/symbol_io.hpp"

namespace polytoep {

/// Environment variable that overrides the default truncation degree.
inline constexpr const char* kDegreeEnv = "POLYTOEP_DEGREE";

struct JobConfig {
  /// check-toeplitz | check-product | decompose | classify | factor | selftest
  std::string subcommand;
  std::vector<std::string> inputs;
  int degree = 8;
  double tol = 1e-9;
  int samples = 50;
  std::uint64_t seed = 0;
  /// Empty: the caller prints the report.
  std::string output;
};

struct JobResult {
  int exit_code = 0;
  Json report;
};

/// 8, or the value of POLYTOEP_DEGREE when set to a positive integer.
int default_degree();

/// Runs one job.  Exit code 0 iff every verdict passes; `classify` returns 0
/// once its battery has run, whatever the verdicts.  Library errors
/// propagate (parse errors, exhausted windows).
JobResult run(const JobConfig& config);

Json report_to_json(const VerificationReport& r);
/// Stable two-space indented rendering with a trailing newline.
std::string render_report(const Json& report);

}  // namespace polytoep
