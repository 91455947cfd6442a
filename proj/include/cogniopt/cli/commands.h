#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cogniopt/cli/config.h"
#include "cogniopt/oracle.h"

namespace cogniopt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitValidation = 4,
};

inline constexpr const char* kToolVersion = "0.1.0";

struct CommandOptions {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> out_dir;  // overrides output.dir
  std::uint64_t seed = oracle::kDefaultSeed;
  unsigned threads = 1;
  std::optional<CapacityLaw> capacity_law;  // overrides scenario.capacity_law
};

/// Shortest text that round-trips a double (17 significant digits).
std::string format_double(double x);

std::string roc_csv(const RunConfig& cfg);

struct OptimizeRun {
  double sensed_snr = 0.0;
  double avg_power_budget = 0.0;
  ThresholdSearchResult result;
};

std::vector<OptimizeRun> optimize_runs(const RunConfig& cfg, unsigned threads);
std::string optimize_sweep_csv(const ThresholdSearchResult& result);
std::string optimize_summary_csv(const std::vector<OptimizeRun>& runs);

std::string ploss_csv(const RunConfig& cfg, CapacityLaw law);

struct ValidationCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Runs every oracle comparison on the first configured scenario.
std::vector<ValidationCheck> run_validation(const RunConfig& cfg, std::uint64_t seed, unsigned threads);
std::string format_validation_report(const std::vector<ValidationCheck>& checks);

int cmd_roc(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ploss(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point: argument parsing, config loading, dispatch.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cogniopt::cli
