#include "evac/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evac {

HazardState make_hazard_state(const BuildingGraph& graph, const HazardConfig& config) {
  if (!(config.spread_rate > 0.0)) throw std::invalid_argument("hazard spread rate must be > 0");
  if (!(config.level_period > 0.0)) throw std::invalid_argument("hazard level period must be > 0");
  if (!is_finite(config.origin)) throw std::invalid_argument("hazard origin must be finite");
  return HazardState{config, std::vector<SensorHazard>(graph.sensor_count())};
}

void propagate(HazardState& state, const BuildingGraph& graph, double now) {
  const HazardConfig& cfg = state.config;
  if (!state.started(now)) return;
  const double radius = cfg.spread_rate * (now - cfg.start_time);
  for (std::size_t s = 0; s < graph.sensor_count(); ++s) {
    SensorHazard& sh = state.sensors[s];
    if (!sh.detected() && euclid(cfg.origin, graph.sensor(s).position) <= radius) {
      sh.detection_time = now;
    }
    if (sh.detected()) {
      const double exposure = now - *sh.detection_time;
      const int level = 1 + static_cast<int>(std::floor(exposure / cfg.level_period));
      sh.level = std::max(sh.level, std::min(8, level));
    }
  }
}

double intensity(const SensorHazard& sensor) {
  return sensor.detected() ? sensor.level * 1e3 : 1.0;
}

std::size_t representative_sensor(const BuildingGraph& graph, std::size_t vertex,
                                  std::size_t edge) {
  const Vec3& p = graph.vertex(vertex).position;
  std::size_t best = BuildingGraph::npos;
  double best_d = 0.0;
  for (std::size_t s : graph.edge_sensors(edge)) {
    const double d = euclid(p, graph.sensor(s).position);
    if (best == BuildingGraph::npos || d < best_d ||
        (d == best_d && graph.sensor(s).id < graph.sensor(best).id)) {
      best = s;
      best_d = d;
    }
  }
  return best;
}

double effective_length_at(const BuildingGraph& graph, const HazardState& state,
                           std::size_t vertex, std::size_t edge, double radius,
                           std::span<const std::size_t> spatial) {
  if (graph.edge_source(edge) != vertex && graph.edge_target(edge) != vertex) {
    throw std::invalid_argument("edge " + std::to_string(graph.edge(edge).id) +
                                " is not incident to vertex " +
                                std::to_string(graph.vertex(vertex).id));
  }
  const std::size_t own = representative_sensor(graph, vertex, edge);
  double multiplier = intensity(state.sensors[own]);
  if (radius > 0.0 && spatial.size() > 1) {
    double sum = 0.0;
    std::size_t others = 0;
    for (std::size_t j : spatial) {
      if (j == own) continue;
      sum += intensity(state.sensors[j]);
      ++others;
    }
    multiplier += sum / static_cast<double>(others);
  }
  return graph.edge(edge).length * multiplier;
}

double effective_length(const BuildingGraph& graph, const HazardState& state, VertexId dn,
                        EdgeId edge, double radius) {
  const std::size_t v = graph.vertex_index(dn);
  const auto spatial = spatial_set_indices(graph, v, radius);
  return effective_length_at(graph, state, v, graph.edge_index(edge), radius, spatial);
}

double growth_rate(const HazardState& state, double now) {
  return state.started(now) ? 1e3 / state.config.level_period : 0.0;
}

DnHazardView hazard_view(const BuildingGraph& graph, const HazardState& state, VertexId dn,
                         double radius, double now) {
  const std::size_t v = graph.vertex_index(dn);
  const auto spatial = spatial_set_indices(graph, v, radius);
  DnHazardView view;
  view.dn = dn;
  view.t_haz = hazard_time_at(state, graph, v, radius, spatial, now);
  view.growth_rate = growth_rate(state, now);
  if (!state.started(now)) return view;
  const Vec3& p = graph.vertex(v).position;
  view.t_initial = euclid(p, state.config.origin) / state.config.spread_rate;
  if (radius > 0.0) {
    for (std::size_t s : spatial) {
      SpatialSensorTiming timing;
      timing.sensor = graph.sensor(s).id;
      timing.predicted = euclid(p, graph.sensor(s).position) / state.config.spread_rate;
      if (state.sensors[s].detected()) {
        timing.since_detection = now - *state.sensors[s].detection_time;
      }
      view.spatial.push_back(timing);
    }
  }
  return view;
}

double hazard_time_at(const HazardState& state, const BuildingGraph& graph, std::size_t vertex,
                      double radius, std::span<const std::size_t> spatial, double now) {
  if (!state.started(now)) return kHazardTimeSentinel;
  const HazardConfig& cfg = state.config;
  const Vec3& p = graph.vertex(vertex).position;
  double t = euclid(p, cfg.origin) / cfg.spread_rate - (now - cfg.start_time);
  if (radius > 0.0) {
    for (std::size_t s : spatial) {
      const SensorHazard& sh = state.sensors[s];
      if (!sh.detected()) continue;  // contributes the sentinel
      const double predicted = euclid(p, graph.sensor(s).position) / cfg.spread_rate;
      t = std::min(t, predicted - (now - *sh.detection_time));
    }
  }
  return std::max(0.0, t);
}

double hazard_time(const HazardState& state, const BuildingGraph& graph, VertexId dn,
                   double radius, double now) {
  const std::size_t v = graph.vertex_index(dn);
  const auto spatial = spatial_set_indices(graph, v, radius);
  return hazard_time_at(state, graph, v, radius, spatial, now);
}

}  // namespace evac
