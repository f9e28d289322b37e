#include "evac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "evac/text.hpp"

namespace evac {

namespace {

const char* kSummaryHeader =
    "occupancy,mode,R,replications,survival_mean,survival_min,survival_max,"
    "congestion_mean,congestion_min,congestion_max";
const char* kRunsHeader =
    "run_id,occupancy,mode,R,seed,survival_rate,exited,perished,total_congestion_time_s,"
    "end_time_s,sp_launched,sp_delivered,sp_dropped,ack_lost";
const char* kAgentsHeader =
    "run_id,agent_id,class,final_group,outcome,exit_or_perish_time_s,queued_time_s,"
    "path_requests,group_switches";

std::string schema_line(const char* kind) {
  return "#schema=evac-" + std::string(kind) + "/" + std::to_string(kCsvSchemaVersion) + "\n";
}

Stat fold(const std::vector<double>& values) {
  Stat s;
  s.min = s.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

/// Data rows of a CSV with our schema line and header; validates the header.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view text, std::string_view header,
                                                    const char* kind) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header) throw std::runtime_error(std::string("unexpected ") + kind + " header");
      seen_header = true;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  if (!seen_header) throw std::runtime_error(std::string("missing ") + kind + " header");
  return rows;
}

double field_number(std::string_view s) {
  double v = 0;
  if (!parse_number(s, v)) throw std::runtime_error("bad number '" + std::string(s) + "'");
  return v;
}

long long field_integer(std::string_view s) {
  long long v = 0;
  if (!parse_integer(s, v)) throw std::runtime_error("bad integer '" + std::string(s) + "'");
  return v;
}

MetricMode field_mode(std::string_view s) {
  MetricMode m;
  if (!parse_metric_mode(s, m)) throw std::runtime_error("bad mode '" + std::string(s) + "'");
  return m;
}

}  // namespace

std::vector<Cell> enumerate_cells(const ScenarioConfig& config) {
  std::set<Cell> cells;
  for (int occ : config.occupancies) {
    for (MetricMode m : config.modes) {
      for (double r : config.radii) cells.insert(Cell{occ, m, r});
    }
  }
  return {cells.begin(), cells.end()};
}

SimParams cell_params(const ScenarioConfig& config, const Cell& cell) {
  SimParams p = config.base;
  p.occupancy = cell.occupancy;
  p.mode = cell.mode;
  p.radius = cell.radius;
  return p;
}

std::vector<RunRecord> run_matrix(const ScenarioConfig& config, const BuildingGraph& graph,
                                  unsigned jobs) {
  std::vector<RunRecord> runs;
  for (const Cell& cell : enumerate_cells(config)) {
    for (std::uint64_t seed : config.seeds) {
      runs.push_back(RunRecord{runs.size(), cell, seed, {}});
    }
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      runs[i].result = run(graph, cell_params(config, runs[i].cell), runs[i].seed);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(runs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return runs;
}

ExperimentSummary summarize(std::span<const RunRecord> runs) {
  std::map<Cell, std::pair<std::vector<double>, std::vector<double>>> by_cell;
  std::vector<const RunRecord*> ordered;
  for (const RunRecord& r : runs) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RunRecord* a, const RunRecord* b) { return a->run_id < b->run_id; });
  for (const RunRecord* r : ordered) {
    auto& [surv, cong] = by_cell[r->cell];
    surv.push_back(r->result.survival_rate);
    cong.push_back(r->result.total_congestion_time);
  }
  ExperimentSummary summary;
  for (const auto& [cell, values] : by_cell) {
    summary.cells.push_back(
        CellSummary{cell, values.first.size(), fold(values.first), fold(values.second)});
  }
  return summary;
}

std::string summary_csv(const ExperimentSummary& summary) {
  std::string out = schema_line("summary") + kSummaryHeader + "\n";
  for (const CellSummary& c : summary.cells) {
    out += std::to_string(c.cell.occupancy) + ',' + to_string(c.cell.mode) + ',' +
           format_number(c.cell.radius) + ',' + std::to_string(c.replications) + ',' +
           format_number(c.survival.mean) + ',' + format_number(c.survival.min) + ',' +
           format_number(c.survival.max) + ',' + format_number(c.congestion.mean) + ',' +
           format_number(c.congestion.min) + ',' + format_number(c.congestion.max) + '\n';
  }
  return out;
}

std::string runs_csv(std::span<const RunRecord> runs) {
  std::string out = schema_line("runs") + kRunsHeader + "\n";
  for (const RunRecord& r : runs) {
    const SimResult& s = r.result;
    out += std::to_string(r.run_id) + ',' + std::to_string(r.cell.occupancy) + ',' +
           to_string(r.cell.mode) + ',' + format_number(r.cell.radius) + ',' +
           std::to_string(r.seed) + ',' + format_number(s.survival_rate) + ',' +
           std::to_string(s.exited) + ',' + std::to_string(s.perished) + ',' +
           format_number(s.total_congestion_time) + ',' + format_number(s.end_time) + ',' +
           std::to_string(s.sp.launched) + ',' + std::to_string(s.sp.delivered) + ',' +
           std::to_string(s.sp.dropped) + ',' + std::to_string(s.sp.acks_lost) + '\n';
  }
  return out;
}

std::string agents_csv(std::span<const RunRecord> runs) {
  std::string out = schema_line("agents") + kAgentsHeader + "\n";
  for (const RunRecord& r : runs) {
    for (const AgentRecord& a : r.result.agents) {
      out += std::to_string(r.run_id) + ',' + std::to_string(a.id) + ',' +
             to_string(a.agent_class) + ',' + to_string(a.final_group) + ',' +
             to_string(a.outcome) + ',' + format_number(a.time) + ',' +
             format_number(a.queued_time) + ',' + std::to_string(a.path_requests) + ',' +
             std::to_string(a.group_switches) + '\n';
    }
  }
  return out;
}

ExperimentSummary parse_summary_csv(std::string_view text) {
  ExperimentSummary summary;
  for (const auto& f : csv_rows(text, kSummaryHeader, "summary")) {
    if (f.size() != 10) throw std::runtime_error("summary row has the wrong number of fields");
    CellSummary c;
    c.cell = Cell{static_cast<int>(field_integer(f[0])), field_mode(f[1]), field_number(f[2])};
    c.replications = static_cast<std::size_t>(field_integer(f[3]));
    c.survival = {field_number(f[4]), field_number(f[5]), field_number(f[6])};
    c.congestion = {field_number(f[7]), field_number(f[8]), field_number(f[9])};
    summary.cells.push_back(c);
  }
  return summary;
}

ExperimentSummary summarize_runs_csv(std::string_view text) {
  std::vector<RunRecord> runs;
  for (const auto& f : csv_rows(text, kRunsHeader, "runs")) {
    if (f.size() != 14) throw std::runtime_error("runs row has the wrong number of fields");
    RunRecord r;
    r.run_id = static_cast<std::size_t>(field_integer(f[0]));
    r.cell = Cell{static_cast<int>(field_integer(f[1])), field_mode(f[2]), field_number(f[3])};
    r.seed = static_cast<std::uint64_t>(field_integer(f[4]));
    r.result.survival_rate = field_number(f[5]);
    r.result.total_congestion_time = field_number(f[8]);
    runs.push_back(std::move(r));
  }
  return summarize(runs);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentOutput run_experiment(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                unsigned jobs) {
  validate(config);
  const BuildingGraph graph = load_graph(config.graph_file);
  ExperimentOutput output;
  output.runs = run_matrix(config, graph, jobs);
  output.summary = summarize(output.runs);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "summary.csv", summary_csv(output.summary));
  write_file(out_dir / "runs.csv", runs_csv(output.runs));
  write_file(out_dir / "agents.csv", agents_csv(output.runs));
  return output;
}

PlotTables emit_plotdata(const ExperimentSummary& summary) {
  if (summary.cells.empty()) throw std::invalid_argument("nothing to plot");
  std::set<double> radii;
  std::set<int> occupancies;
  std::set<std::pair<MetricMode, double>> series;
  for (const CellSummary& c : summary.cells) {
    radii.insert(c.cell.radius);
    occupancies.insert(c.cell.occupancy);
    series.insert({c.cell.mode, c.cell.radius});
  }
  const bool label_radius = radii.size() > 1;
  auto label = [&](const std::pair<MetricMode, double>& s) {
    std::string l = to_string(s.first);
    if (label_radius) l += "_R" + format_number(s.second);
    return l;
  };

  auto table = [&](auto value_of) {
    std::string out = "occupancy";
    for (const auto& s : series) out += ',' + label(s);
    out += '\n';
    for (int occ : occupancies) {
      out += std::to_string(occ);
      for (const auto& s : series) {
        out += ',';
        for (const CellSummary& c : summary.cells) {
          if (c.cell == Cell{occ, s.first, s.second}) out += format_number(value_of(c));
        }
      }
      out += '\n';
    }
    return out;
  };
  return PlotTables{table([](const CellSummary& c) { return c.survival.mean; }),
                    table([](const CellSummary& c) { return c.congestion.mean; })};
}

}  // namespace evac
