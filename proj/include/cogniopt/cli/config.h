#pragma once
// JSON run configuration. Every field may be given in linear units or, with a
// `_db` suffix, in decibels; everything is linear once loaded.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cogniopt/capacity.h"
#include "cogniopt/channel.h"
#include "cogniopt/optimizer.h"
#include "cogniopt/sensing.h"

namespace cogniopt::cli {

/// Malformed or out-of-range configuration; `field` is the dotted JSON path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ValidationSettings {
  std::uint64_t mc_trials = 20000;
  std::map<std::string, double> tolerance_overrides;
};

struct RunConfig {
  std::vector<double> sensed_snrs;  // linear, one detector per entry
  std::int64_t num_samples = 12000;
  double noise_variance = 1.0;
  std::optional<double> sampling_freq;
  std::optional<double> sensing_time;
  std::optional<double> frame_duration;
  std::vector<double> eta_grid;

  ChannelParams channel;
  ScenarioConfig scenario;
  std::vector<double> avg_power_budgets;  // linear, one optimization run per entry

  DualState solver;
  EtaRange eta_search;

  ValidationSettings validation;
  std::string output_dir = "out";

  /// SensingParams for one of the configured sensed SNRs.
  SensingParams sensing(std::size_t index = 0) const;

  /// Fully resolved parameters, used for manifests.
  nlohmann::ordered_json resolved() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

CapacityLaw parse_capacity_law(const std::string& text);
std::string to_string(CapacityLaw law);

double linear_to_db(double linear);

}  // namespace cogniopt::cli
