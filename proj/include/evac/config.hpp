#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evac/sim_engine.hpp"

namespace evac {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment matrix: every (occupancy, mode, R) cell is run once per seed.
/// Everything else is shared by all runs through `base`.
struct ScenarioConfig {
  std::filesystem::path graph_file;
  std::vector<int> occupancies{30};
  std::vector<MetricMode> modes{MetricMode::CM};
  std::vector<double> radii{0.0};
  std::vector<std::uint64_t> seeds{1};
  SimParams base;

  std::size_t replications() const { return seeds.size(); }
};

/// Parses the `[section]` / `key = value` format. Relative graph paths are
/// resolved against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Checks cross-field invariants and the simulation parameters.
void validate(const ScenarioConfig& config);

/// Named matrices; currently only "paper-matrix" (occupancies 30/60/90/120,
/// SM/TM/CM, seeds 1..5).
void apply_preset(ScenarioConfig& config, std::string_view name);

void apply_seed_offset(ScenarioConfig& config, std::uint64_t offset);

}  // namespace evac
