#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "evac/building_graph.hpp"

namespace evac {

/// Stand-in for "the hazard will not reach this node in any relevant horizon".
inline constexpr double kHazardTimeSentinel = 1e9;

struct HazardConfig {
  Vec3 origin;
  double start_time = 0.0;    // s
  double spread_rate = 20.0;  // cm/s
  double level_period = 30.0; // s of exposure per intensity level step
};

struct SensorHazard {
  std::optional<double> detection_time;
  int level = 0;  // 1..8 once detected, 0 before

  bool detected() const { return detection_time.has_value(); }
};

/// Fire state for one run; one entry per sensor, in graph sensor-index order.
struct HazardState {
  HazardConfig config;
  std::vector<SensorHazard> sensors;

  bool started(double now) const { return now >= config.start_time; }
};

HazardState make_hazard_state(const BuildingGraph& graph, const HazardConfig& config);

/// Radial spread: a sensor is detected once the fire front (spread_rate times
/// the elapsed time) reaches it; its level then climbs one step per
/// level_period seconds up to 8.
void propagate(HazardState& state, const BuildingGraph& graph, double now);

/// 1 when nothing is detected, level * 1000 otherwise.
double intensity(const SensorHazard& sensor);

/// Sensor on `edge` closest to the vertex (lowest id on ties); this is the
/// reading a decision node uses for that incident edge.
std::size_t representative_sensor(const BuildingGraph& graph, std::size_t vertex, std::size_t edge);

/// Effective length of an incident edge as seen from a decision node. The
/// edge's own reading scales the physical length; when the node has spatial
/// information (R > 0 and at least two sensors in range) the mean intensity
/// of the other sensors in range is added to the multiplier.
double effective_length(const BuildingGraph& graph, const HazardState& state, VertexId dn,
                        EdgeId edge, double radius);
double effective_length_at(const BuildingGraph& graph, const HazardState& state,
                           std::size_t vertex, std::size_t edge, double radius,
                           std::span<const std::size_t> spatial);

struct SpatialSensorTiming {
  SensorId sensor = 0;
  double predicted = 0.0;                // t_predn, s
  std::optional<double> since_detection; // t_enode, s; empty while undetected
};

/// What a decision node knows about the approaching hazard.
struct DnHazardView {
  VertexId dn = 0;
  double t_initial = kHazardTimeSentinel;
  double t_haz = kHazardTimeSentinel;
  double growth_rate = 0.0;  // intensity units per second
  std::vector<SpatialSensorTiming> spatial;
};

DnHazardView hazard_view(const BuildingGraph& graph, const HazardState& state, VertexId dn,
                         double radius, double now);

/// Predicted seconds until the node becomes hazardous, floored at 0. With
/// R = 0 only the straight-line estimate from the fire origin is used;
/// otherwise detected sensors in range may bring the estimate forward.
double hazard_time(const HazardState& state, const BuildingGraph& graph, VertexId dn,
                   double radius, double now);
double hazard_time_at(const HazardState& state, const BuildingGraph& graph, std::size_t vertex,
                      double radius, std::span<const std::size_t> spatial, double now);

/// Hazard growth rate at a node: 1000 / level_period once the fire has started.
double growth_rate(const HazardState& state, double now);

}  // namespace evac
