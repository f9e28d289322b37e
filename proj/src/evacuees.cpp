#include "evac/evacuees.hpp"

#include <algorithm>
#include <stdexcept>

namespace evac {

const char* to_string(AgentClass c) { return c == AgentClass::ClassOne ? "one" : "two"; }

const char* to_string(Group g) {
  switch (g) {
    case Group::TimeGroup: return "time";
    case Group::SafetyGroup: return "safety";
    case Group::CongestionEase: return "congestion_ease";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Moving: return "moving";
    case Status::Queued: return "queued";
    case Status::Exited: return "exited";
    case Status::Perished: return "perished";
  }
  return "?";
}

namespace {

void set_group(Evacuee& e, Group g) {
  if (e.group != g) {
    e.group = g;
    ++e.group_switches;
  }
}

}  // namespace

Evacuee make_evacuee(int id, AgentClass agent_class, std::size_t vertex,
                     const AgentParams& params) {
  Evacuee e;
  e.id = id;
  e.agent_class = agent_class;
  e.group = e.base_group =
      agent_class == AgentClass::ClassOne ? Group::TimeGroup : Group::SafetyGroup;
  e.health = params.initial_health;
  e.base_speed = e.current_speed =
      agent_class == AgentClass::ClassOne ? params.class_one_speed : params.class_two_speed;
  e.vertex = vertex;
  e.status = Status::Queued;
  return e;
}

void update_health(Evacuee& e, double dt, double local_intensity, const AgentParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("health step needs dt > 0");
  if (e.absorbed()) return;
  const bool one = e.agent_class == AgentClass::ClassOne;
  const double fatigue = one ? params.class_one_fatigue : params.class_two_fatigue;
  const double damage = one ? params.class_one_damage : params.class_two_damage;
  const double level = local_intensity > 1.0 ? local_intensity / 1e3 : 0.0;
  e.health = std::max(0.0, e.health - dt * (fatigue + damage * level));
  e.current_speed = e.health < params.health_threshold ? e.base_speed / 2.0 : e.base_speed;
  if (e.health <= 0.0) e.status = Status::Perished;
}

bool regroup_health(Evacuee& e, const AgentParams& params) {
  if (e.agent_class != AgentClass::ClassOne || e.demoted || e.health >= params.health_threshold) {
    return false;
  }
  e.demoted = true;
  e.base_group = Group::SafetyGroup;
  if (e.group != Group::CongestionEase) set_group(e, Group::SafetyGroup);
  return true;
}

bool regroup_congestion(Evacuee& e, std::size_t queue_length, const AgentParams& params) {
  if (queue_length < params.congestion_threshold || e.group == Group::CongestionEase) return false;
  set_group(e, Group::CongestionEase);
  return true;
}

cpn::MetricClass group_metric(Group base) {
  return base == Group::TimeGroup ? cpn::MetricClass::Time : cpn::MetricClass::Safety;
}

void serve_evacuee(Evacuee& e, const cpn::Mailbox& mailbox, bool congestion_ease, double alpha,
                   std::span<const std::size_t> fallback, const BuildingGraph& graph,
                   const AgentParams& params) {
  const cpn::MailboxEntry* entry =
      congestion_ease ? cpn::congestion_ease_path(mailbox, alpha) : cpn::best_path(mailbox);
  e.path.clear();
  if (entry) {
    for (VertexId id : entry->path) e.path.push_back(graph.vertex_index(id));
  } else {
    e.path.assign(fallback.begin(), fallback.end());
  }
  if (e.path.empty() || e.path.front() != e.vertex) {
    throw std::logic_error("route does not start at the evacuee's vertex");
  }
  e.path_pos = 0;
  e.edge = BuildingGraph::npos;
  e.progress = 0.0;
  e.depth_remaining = params.movement_depth;
  e.status = Status::Moving;
  ++e.path_requests;
  if (e.group == Group::CongestionEase) set_group(e, e.base_group);
}

Arrival advance(Evacuee& e, double dt, const BuildingGraph& graph) {
  if (e.status != Status::Moving) return Arrival::None;
  if (e.edge == BuildingGraph::npos) {
    if (e.path_pos + 1 >= e.path.size()) {
      e.status = Status::Queued;
      return Arrival::NeedsService;
    }
    e.edge = graph.edge_between(e.path[e.path_pos], e.path[e.path_pos + 1]);
    if (e.edge == BuildingGraph::npos) throw std::logic_error("route uses a missing edge");
    e.progress = 0.0;
  }
  e.progress += e.current_speed * dt;
  if (e.progress < graph.edge(e.edge).length) return Arrival::None;

  ++e.path_pos;
  e.vertex = e.path[e.path_pos];
  e.edge = BuildingGraph::npos;
  e.progress = 0.0;
  if (graph.vertex(e.vertex).is_exit) {
    e.status = Status::Exited;
    return Arrival::Exited;
  }
  if (e.depth_remaining > 0 && e.path_pos + 1 < e.path.size()) {
    --e.depth_remaining;
    return Arrival::PassThrough;
  }
  e.status = Status::Queued;
  return Arrival::NeedsService;
}

double local_intensity(const Evacuee& e, const BuildingGraph& graph, const HazardState& hazard) {
  if (e.edge != BuildingGraph::npos) {
    const std::size_t from = graph.edge_source(e.edge);
    const double length = graph.edge(e.edge).length;
    // Parameter of the evacuee's position measured from the edge's v1.
    const double along = std::clamp(e.progress / length, 0.0, 1.0);
    const double t = e.vertex == from ? along : 1.0 - along;
    std::size_t best = BuildingGraph::npos;
    double best_gap = 0.0;
    for (std::size_t s : graph.edge_sensors(e.edge)) {
      const double gap = std::abs(graph.sensor(s).t - t);
      if (best == BuildingGraph::npos || gap < best_gap) {
        best = s;
        best_gap = gap;
      }
    }
    return intensity(hazard.sensors[best]);
  }
  std::size_t best = BuildingGraph::npos;
  double best_d = 0.0;
  const Vec3& p = graph.vertex(e.vertex).position;
  for (const Adjacent& a : graph.neighbors(e.vertex)) {
    for (std::size_t s : graph.edge_sensors(a.edge)) {
      const double d = euclid(p, graph.sensor(s).position);
      if (best == BuildingGraph::npos || d < best_d) {
        best = s;
        best_d = d;
      }
    }
  }
  return best == BuildingGraph::npos ? 1.0 : intensity(hazard.sensors[best]);
}

}  // namespace evac
