#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tomokin/cli/scenario.hpp"

namespace tomokin::cli {

enum ExitCode : int { kSuccess = 0, kParseFailure = 2, kValidationFailure = 3, kNumericFailure = 4 };

struct RunOptions {
  std::filesystem::path out_dir = "tomokin-out";
  unsigned threads = 1;
  double tolerance_scale = 1;
};

// One measured norm. With a limit it passes when value <= limit, or
// value >= limit for a floor.
struct Measure {
  std::string key;
  double value = 0;
  std::optional<double> limit;
  bool floor = false;
  bool ok() const;
};

struct CheckResult {
  std::string name;
  std::vector<Measure> measures;
  bool passed() const;
  // First failing measure, formatted for a message.
  std::string failure() const;
};

struct RunResult {
  int exit_code = kSuccess;
  std::string message;
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;  // in write order
  std::string report;
};

// key = value lines under [check] headers.
std::string format_report(const Scenario& s, const std::vector<CheckResult>& checks,
                          const RunOptions& opt);

// Runs a validated scenario. Artifacts go to out_dir / scenario name.
RunResult run_scenario(const Scenario& s, const RunOptions& opt);

// Parses, validates and runs; every failure becomes an exit code.
RunResult run_text(const std::string& yaml, const RunOptions& opt);
// A scenario file, or a preset name when no such file exists.
RunResult run_path_or_preset(const std::string& target, const RunOptions& opt);

struct Preset {
  std::string name;
  std::string description;
  std::string yaml;
};
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace tomokin::cli
