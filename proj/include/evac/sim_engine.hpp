#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "evac/building_graph.hpp"
#include "evac/cpn.hpp"
#include "evac/evacuees.hpp"
#include "evac/hazard.hpp"
#include "evac/metrics.hpp"
#include "evac/random.hpp"

namespace evac {

/// SM routes everyone by safety, TM everyone by time, CM by group with
/// dynamic grouping.
enum class MetricMode { SM, TM, CM };

const char* to_string(MetricMode m);
bool parse_metric_mode(std::string_view text, MetricMode& out);

struct SimParams {
  int occupancy = 0;
  double radius = 0.0;  // R, cm
  MetricMode mode = MetricMode::CM;
  bool dynamic_grouping = true;  // only meaningful in CM
  double class_one_fraction = 0.5;

  HazardConfig hazard;
  cpn::CpnParams cpn;
  AgentParams agents;

  double arrival_window = 10.0;  // s
  double departure_rate = 1.0;   // evacuees/s per decision node
  double tick = 1.0;             // s
  double max_time = 900.0;       // s
  int sps_per_tick = 2;          // per node, per metric class, while there is demand
  int warmup_sps = 20;           // per node, per metric class, on the first step
  double alpha = 1.5;            // congestion-ease acceptance band
};

void validate(const SimParams& params);

struct AgentRecord {
  int id = 0;
  AgentClass agent_class = AgentClass::ClassOne;
  Group final_group = Group::TimeGroup;
  Status outcome = Status::Perished;
  double time = 0.0;         // exit or perish instant, s
  double queued_time = 0.0;  // s
  int path_requests = 0;
  int group_switches = 0;
};

struct SimResult {
  double survival_rate = 1.0;
  std::size_t exited = 0;
  std::size_t perished = 0;
  double total_congestion_time = 0.0;  // agent-seconds spent queued
  double end_time = 0.0;
  cpn::SpStatistics sp;
  std::vector<AgentRecord> agents;
};

/// One observable thing that happened inside a step, for tracing.
struct TraceEvent {
  double time = 0.0;
  int phase = 0;
  std::string what;
};

/// Fixed-tick evacuation run. Each step executes, in order:
///   1. hazard propagation;
///   2. decision-node refresh (effective lengths, hazard time, queue stats);
///   3. smart-packet exploration from nodes with demand, ACKs applied at once;
///   4. queue service, one evacuee per node per second;
///   5. agent movement, health, and arrivals (with congestion regrouping);
///   6. clock advance.
class Simulation {
 public:
  Simulation(const BuildingGraph& graph, SimParams params, std::uint64_t seed);

  /// Places an evacuee waiting at `vertex`; only before the first step.
  int add_evacuee(AgentClass agent_class, VertexId vertex);
  /// Random placement over non-exit vertices, as run() does.
  void populate();

  void step();
  bool finished() const;
  /// Marks agents still inside as perished at the current time.
  void finalize();
  SimResult result() const;

  double now() const { return now_; }
  const SimParams& params() const { return params_; }
  const std::vector<Evacuee>& evacuees() const { return agents_; }
  Evacuee& evacuee(int id) { return agents_.at(static_cast<std::size_t>(id)); }
  const std::deque<int>& queue(std::size_t vertex) const { return queues_[vertex]; }
  const cpn::CpnNetwork& network() const { return network_; }
  cpn::CpnNetwork& network() { return network_; }
  const HazardState& hazard() const { return hazard_; }
  /// Queued agent-seconds summed per tick from queue lengths (cross-check of
  /// the per-agent totals).
  double queue_occupancy_time() const { return queue_occupancy_time_; }

  std::function<void(const TraceEvent&)> on_trace;

 private:
  void refresh_nodes();
  void explore();
  void serve_queues();
  void move_agents();
  cpn::MetricClass routing_metric(const Evacuee& e) const;
  bool grouping_active() const { return params_.mode == MetricMode::CM && params_.dynamic_grouping; }
  void trace(int phase, std::string what);

  const BuildingGraph* graph_;
  SimParams params_;
  Rng rng_;
  double now_ = 0.0;
  bool started_ = false;
  HazardState hazard_;
  cpn::CpnNetwork network_;
  std::vector<std::vector<std::size_t>> spatial_;
  std::vector<std::vector<std::size_t>> fallback_;
  std::vector<Evacuee> agents_;
  std::vector<std::deque<int>> queues_;
  std::vector<double> service_credit_;
  std::vector<ArrivalWindow> arrivals_;
  std::vector<char> approaching_;
  double queue_occupancy_time_ = 0.0;
};

/// Builds, populates and runs a scenario to completion.
SimResult run(const BuildingGraph& graph, const SimParams& params, std::uint64_t seed);

}  // namespace evac
