#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "evac/building_graph.hpp"
#include "evac/config.hpp"
#include "evac/experiment.hpp"

namespace {

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("EVAC_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

evac::ScenarioConfig load_checked(const std::string& path) {
  evac::ScenarioConfig config = evac::load_config(path);
  evac::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Building evacuation simulator with cognitive-packet-network routing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string preset;
  std::uint64_t seed_offset = 0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* run = app.add_subcommand("run", "Run an experiment matrix and write CSV results");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--preset", preset, "Named experiment matrix (paper-matrix)");
  run->add_option("--seed-offset", seed_offset, "Added to every seed");
  run->add_option("--jobs", jobs, "Concurrent replications");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario config and its graph");
  validate->add_option("--config", validate_path, "Scenario config file")->required();

  std::string summary_path;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "Reshape summary.csv into grouped-bar tables");
  plot->add_option("--summary", summary_path, "summary.csv from a run")->required();
  plot->add_option("--out", plot_out, "Output directory (defaults to the summary's)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      evac::ScenarioConfig config = evac::load_config(config_path);
      if (!preset.empty()) evac::apply_preset(config, preset);
      evac::apply_seed_offset(config, seed_offset);
      const auto cells = evac::enumerate_cells(config);
      spdlog::info("running {} cells x {} replications", cells.size(), config.replications());
      const auto output = evac::run_experiment(config, out_dir, jobs);
      for (const auto& c : output.summary.cells) {
        spdlog::debug("occupancy {} {} R={}: survival {:.3f} [{:.3f}, {:.3f}]", c.cell.occupancy,
                      evac::to_string(c.cell.mode), c.cell.radius, c.survival.mean,
                      c.survival.min, c.survival.max);
      }
      spdlog::info("wrote {}", (std::filesystem::path(out_dir) / "summary.csv").string());
    } else if (*validate) {
      const evac::ScenarioConfig config = load_checked(validate_path);
      const evac::BuildingGraph graph = evac::load_graph(config.graph_file);
      spdlog::info("ok: {} vertices, {} edges, {} sensors, {} exits; {} cells x {} replications",
                   graph.vertex_count(), graph.edge_count(), graph.sensor_count(),
                   graph.exits().size(), evac::enumerate_cells(config).size(),
                   config.replications());
    } else if (*plot) {
      const auto summary = evac::parse_summary_csv(evac::read_file(summary_path));
      const auto tables = evac::emit_plotdata(summary);
      const std::filesystem::path dir =
          plot_out.empty() ? std::filesystem::path(summary_path).parent_path()
                           : std::filesystem::path(plot_out);
      if (!dir.empty()) std::filesystem::create_directories(dir);
      evac::write_file(dir / "survival_plot.csv", tables.survival);
      evac::write_file(dir / "congestion_plot.csv", tables.congestion);
      spdlog::info("wrote plot tables to {}", dir.empty() ? "." : dir.string());
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
