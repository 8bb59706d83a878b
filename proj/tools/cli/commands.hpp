#pragma once

#include "cli/config.hpp"
#include "surfspline/analysis.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace surfspline::cli {

// Stable exit-code contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitUnisolvency = 2,
  kExitConditioning = 3,
  kExitInsufficientLevels = 4,
  kExitMollifierGate = 5,
};

const std::vector<std::string>& command_names();
std::vector<KeySpec> schema_for(const std::string& command);

/// Reads a config file for `command` with no further overrides.
RunConfig load_config(const std::string& command, const std::string& path);

StudyConfig study_config_from(const RunConfig& cfg);
InstabilityConfig instability_config_from(const RunConfig& cfg);

/// <out>/<command>_<config hash>; every output file of a run starts with it.
std::string output_stem(const RunConfig& cfg);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Runs the command, writing outputs and the resolved config next to them.
/// Failures are reported on `err` as one "error: <class>: <reason>" line and
/// mapped to the exit-code contract.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace surfspline::cli
