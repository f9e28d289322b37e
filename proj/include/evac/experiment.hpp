#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evac/building_graph.hpp"
#include "evac/config.hpp"
#include "evac/sim_engine.hpp"

namespace evac {

inline constexpr int kCsvSchemaVersion = 1;

struct Cell {
  int occupancy = 0;
  MetricMode mode = MetricMode::CM;
  double radius = 0.0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct RunRecord {
  std::size_t run_id = 0;
  Cell cell;
  std::uint64_t seed = 0;
  SimResult result;
};

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CellSummary {
  Cell cell;
  std::size_t replications = 0;
  Stat survival;
  Stat congestion;
};

struct ExperimentSummary {
  std::vector<CellSummary> cells;  // sorted by cell
};

/// Distinct cells of the matrix in (occupancy, mode, R) order.
std::vector<Cell> enumerate_cells(const ScenarioConfig& config);

SimParams cell_params(const ScenarioConfig& config, const Cell& cell);

/// Every cell x seed, on up to `jobs` threads. Records come back in run_id
/// order whatever the scheduling.
std::vector<RunRecord> run_matrix(const ScenarioConfig& config, const BuildingGraph& graph,
                                  unsigned jobs = 1);

/// Mean/min/max per cell; replications are folded in seed order.
ExperimentSummary summarize(std::span<const RunRecord> runs);

std::string summary_csv(const ExperimentSummary& summary);
std::string runs_csv(std::span<const RunRecord> runs);
std::string agents_csv(std::span<const RunRecord> runs);

ExperimentSummary parse_summary_csv(std::string_view text);
/// Rebuilds per-cell survival and congestion values from runs.csv text.
ExperimentSummary summarize_runs_csv(std::string_view text);

struct ExperimentOutput {
  ExperimentSummary summary;
  std::vector<RunRecord> runs;
};

/// Runs the matrix and writes summary.csv, runs.csv and agents.csv to out_dir.
ExperimentOutput run_experiment(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                unsigned jobs = 1);

struct PlotTables {
  std::string survival;    // occupancy rows x series columns, mean survival rate
  std::string congestion;  // same layout, mean congestion time
};

/// Grouped-bar tables. Series are modes, suffixed with R when the summary
/// holds more than one R. Throws std::invalid_argument on an empty summary.
PlotTables emit_plotdata(const ExperimentSummary& summary);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace evac
