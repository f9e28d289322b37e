#include "evac/sim_engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace evac {

const char* to_string(MetricMode m) {
  switch (m) {
    case MetricMode::SM: return "SM";
    case MetricMode::TM: return "TM";
    case MetricMode::CM: return "CM";
  }
  return "?";
}

bool parse_metric_mode(std::string_view text, MetricMode& out) {
  if (text == "SM") out = MetricMode::SM;
  else if (text == "TM") out = MetricMode::TM;
  else if (text == "CM") out = MetricMode::CM;
  else return false;
  return true;
}

void validate(const SimParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(p.occupancy >= 0, "occupancy must be >= 0");
  require(p.radius >= 0.0, "R must be >= 0");
  require(p.class_one_fraction >= 0.0 && p.class_one_fraction <= 1.0,
          "class_one_fraction must lie in [0,1]");
  require(p.arrival_window > 0.0, "arrival window must be > 0");
  require(p.departure_rate > 0.0, "departure rate must be > 0");
  require(p.tick > 0.0, "tick must be > 0");
  require(p.max_time > 0.0, "max_time must be > 0");
  require(p.sps_per_tick >= 0 && p.warmup_sps >= 0, "smart packet counts must be >= 0");
  require(p.alpha >= 1.0, "alpha must be >= 1");
  require(p.agents.movement_depth >= 0, "movement depth must be >= 0");
  require(p.agents.class_one_speed > 0.0 && p.agents.class_two_speed > 0.0,
          "agent speeds must be > 0");
  require(p.agents.class_one_fatigue >= 0.0 && p.agents.class_two_fatigue >= 0.0 &&
              p.agents.class_one_damage >= 0.0 && p.agents.class_two_damage >= 0.0,
          "health rates must be >= 0");
  require(p.agents.initial_health > 0.0, "initial health must be > 0");
  require(p.hazard.spread_rate > 0.0, "hazard spread rate must be > 0");
  require(p.hazard.level_period > 0.0, "hazard level period must be > 0");
  require(p.cpn.rnn.smoothing >= 0.0 && p.cpn.rnn.smoothing < 1.0, "a must lie in [0,1)");
  require(p.cpn.exploration >= 0.0 && p.cpn.exploration <= 1.0, "epsilon must lie in [0,1]");
  require(p.cpn.mailbox_capacity >= 1, "mailbox capacity must be >= 1");
  require(p.cpn.mailbox_expiry > 0.0, "mailbox expiry must be > 0");
  require(p.cpn.age_budget > 0.0, "age budget must be > 0");
}

Simulation::Simulation(const BuildingGraph& graph, SimParams params, std::uint64_t seed)
    : graph_(&graph),
      params_((validate(params), params)),
      rng_(seed),
      hazard_(make_hazard_state(graph, params.hazard)),
      network_(graph, params.cpn),
      fallback_(static_exit_paths(graph)),
      queues_(graph.vertex_count()),
      service_credit_(graph.vertex_count(), 0.0),
      arrivals_(graph.vertex_count(), ArrivalWindow(params.arrival_window)),
      approaching_(graph.vertex_count(), 0) {
  spatial_.reserve(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    spatial_.push_back(spatial_set_indices(graph, v, params_.radius));
  }
}

int Simulation::add_evacuee(AgentClass agent_class, VertexId vertex) {
  if (started_) throw std::logic_error("evacuees are placed before the first step");
  const std::size_t v = graph_->vertex_index(vertex);
  if (graph_->vertex(v).is_exit) throw std::invalid_argument("evacuees start inside the building");
  const int id = static_cast<int>(agents_.size());
  agents_.push_back(make_evacuee(id, agent_class, v, params_.agents));
  queues_[v].push_back(id);
  return id;
}

void Simulation::populate() {
  std::vector<VertexId> inside;
  for (const Vertex& v : graph_->vertices()) {
    if (!v.is_exit) inside.push_back(v.id);
  }
  for (int i = 0; i < params_.occupancy; ++i) {
    const VertexId at = inside[rng_.below(inside.size())];
    const AgentClass cls =
        rng_.uniform() < params_.class_one_fraction ? AgentClass::ClassOne : AgentClass::ClassTwo;
    add_evacuee(cls, at);
  }
}

bool Simulation::finished() const {
  if (now_ >= params_.max_time) return true;
  return std::all_of(agents_.begin(), agents_.end(), [](const Evacuee& e) { return e.absorbed(); });
}

void Simulation::trace(int phase, std::string what) {
  if (on_trace) on_trace(TraceEvent{now_, phase, std::move(what)});
}

cpn::MetricClass Simulation::routing_metric(const Evacuee& e) const {
  switch (params_.mode) {
    case MetricMode::SM: return cpn::MetricClass::Safety;
    case MetricMode::TM: return cpn::MetricClass::Time;
    case MetricMode::CM: break;
  }
  return group_metric(e.base_group);
}

void Simulation::step() {
  if (finished()) throw std::logic_error("simulation already finished");

  // 1
  propagate(hazard_, *graph_, now_);
  // 2
  refresh_nodes();
  // 3
  explore();
  // 4
  serve_queues();
  // 5
  move_agents();
  // 6
  started_ = true;
  now_ += params_.tick;
}

void Simulation::refresh_nodes() {
  const BuildingGraph& g = *graph_;
  const double c = growth_rate(hazard_, now_);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).is_exit) continue;
    cpn::NodeSnapshot& snap = network_.snapshot(v);
    const auto adjacent = g.neighbors(v);
    for (std::size_t s = 0; s < adjacent.size(); ++s) {
      snap.effective_length[s] =
          effective_length_at(g, hazard_, v, adjacent[s].edge, params_.radius, spatial_[v]);
    }
    snap.hazard_time = hazard_time_at(hazard_, g, v, params_.radius, spatial_[v], now_);
    snap.growth_rate = c;
    snap.stats.queue_length = static_cast<double>(queues_[v].size());
    snap.stats.window = params_.arrival_window;
    snap.stats.departure_rate = params_.departure_rate;
    snap.stats = update_arrival_rate(snap.stats, arrivals_[v].count(now_));
  }
}

void Simulation::explore() {
  const BuildingGraph& g = *graph_;
  network_.expire(now_);

  std::fill(approaching_.begin(), approaching_.end(), 0);
  for (const Evacuee& e : agents_) {
    if (e.status == Status::Moving && e.path_pos + 1 < e.path.size()) {
      approaching_[e.path[e.path_pos + 1]] = 1;
    }
  }

  std::vector<cpn::MetricClass> classes;
  if (params_.mode != MetricMode::SM) classes.push_back(cpn::MetricClass::Time);
  if (params_.mode != MetricMode::TM) classes.push_back(cpn::MetricClass::Safety);

  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).is_exit) continue;
    int count = (!queues_[v].empty() || approaching_[v]) ? params_.sps_per_tick : 0;
    if (!started_) count += params_.warmup_sps;
    for (cpn::MetricClass metric : classes) {
      for (int i = 0; i < count; ++i) network_.explore(v, metric, now_, rng_);
    }
  }
}

void Simulation::serve_queues() {
  const BuildingGraph& g = *graph_;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).is_exit) continue;
    std::deque<int>& queue = queues_[v];
    double credit = service_credit_[v] + params_.departure_rate * params_.tick;
    while (credit >= 1.0 && !queue.empty()) {
      Evacuee& e = agents_[static_cast<std::size_t>(queue.front())];
      queue.pop_front();
      credit -= 1.0;
      const bool ease = grouping_active() && e.group == Group::CongestionEase;
      const cpn::MetricClass metric = routing_metric(e);
      serve_evacuee(e, network_.mailbox(v, metric), ease, params_.alpha, fallback_[v], g,
                    params_.agents);
      if (on_trace) {
        std::string route;
        for (std::size_t p : e.path) route += (route.empty() ? "" : "-") + std::to_string(g.vertex(p).id);
        trace(4, "serve agent " + std::to_string(e.id) + " at " + std::to_string(g.vertex(v).id) +
                     " by " + cpn::to_string(metric) + (ease ? " (ease)" : "") + " route " + route);
      }
    }
    service_credit_[v] = queue.empty() ? 0.0 : credit;
  }
}

void Simulation::move_agents() {
  const BuildingGraph& g = *graph_;
  const double end = now_ + params_.tick;
  for (Evacuee& e : agents_) {
    if (e.absorbed()) continue;
    const Arrival arrival = advance(e, params_.tick, g);
    if (arrival == Arrival::Exited) {
      e.outcome_time = end;
      trace(5, "agent " + std::to_string(e.id) + " exited at " + std::to_string(g.vertex(e.vertex).id));
      continue;
    }

    const bool was_queued = e.status == Status::Queued && arrival == Arrival::None;
    update_health(e, params_.tick, local_intensity(e, g, hazard_), params_.agents);
    if (e.status == Status::Perished) {
      if (was_queued) std::erase(queues_[e.vertex], e.id);
      e.outcome_time = end;
      trace(5, "agent " + std::to_string(e.id) + " perished");
      continue;
    }
    if (grouping_active() && regroup_health(e, params_.agents)) {
      trace(5, "agent " + std::to_string(e.id) + " demoted to safety group");
    }

    if (arrival == Arrival::None) continue;
    arrivals_[e.vertex].record(end);
    if (arrival == Arrival::NeedsService) {
      std::deque<int>& queue = queues_[e.vertex];
      if (grouping_active() && regroup_congestion(e, queue.size(), params_.agents)) {
        trace(5, "agent " + std::to_string(e.id) + " joins congestion-ease group");
      }
      queue.push_back(e.id);
      trace(5, "agent " + std::to_string(e.id) + " queued at " + std::to_string(g.vertex(e.vertex).id));
    } else {
      trace(5, "agent " + std::to_string(e.id) + " passes " + std::to_string(g.vertex(e.vertex).id));
    }
  }

  std::size_t waiting = 0;
  for (const auto& q : queues_) waiting += q.size();
  queue_occupancy_time_ += static_cast<double>(waiting) * params_.tick;
  for (Evacuee& e : agents_) {
    if (e.status == Status::Queued) e.queued_time += params_.tick;
  }
}

void Simulation::finalize() {
  for (Evacuee& e : agents_) {
    if (e.absorbed()) continue;
    if (e.status == Status::Queued) std::erase(queues_[e.vertex], e.id);
    e.status = Status::Perished;
    e.outcome_time = now_;
  }
}

SimResult Simulation::result() const {
  SimResult r;
  r.end_time = now_;
  r.sp = network_.statistics();
  for (const Evacuee& e : agents_) {
    r.agents.push_back({e.id, e.agent_class, e.group, e.status, e.outcome_time, e.queued_time,
                        e.path_requests, e.group_switches});
    if (e.status == Status::Exited) ++r.exited;
    if (e.status == Status::Perished) ++r.perished;
    r.total_congestion_time += e.queued_time;
  }
  r.survival_rate =
      agents_.empty() ? 1.0 : static_cast<double>(r.exited) / static_cast<double>(agents_.size());
  return r;
}

SimResult run(const BuildingGraph& graph, const SimParams& params, std::uint64_t seed) {
  Simulation sim(graph, params, seed);
  sim.populate();
  while (!sim.finished()) sim.step();
  sim.finalize();
  return sim.result();
}

}  // namespace evac
