#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "evac/building_graph.hpp"

namespace evac {

/// Queue state a decision node publishes for delay estimation.
struct NodeStats {
  double queue_length = 0.0;
  double arrival_rate = 0.0;    // evacuees/s over the window
  double departure_rate = 1.0;  // evacuees/s served
  double window = 10.0;         // s
};

/// Little's-theorem congestion delay for an evacuee reaching the node t_i
/// seconds from now; clamped at zero and zero when nothing arrives.
double little_delay(const NodeStats& stats, double t_i);

/// Sets the arrival rate from the arrivals counted in the last window.
NodeStats update_arrival_rate(NodeStats stats, std::size_t arrivals_in_window);

/// Sliding record of arrival instants at one node.
class ArrivalWindow {
 public:
  explicit ArrivalWindow(double window = 10.0) : window_(window) {
    if (!(window > 0.0)) throw std::invalid_argument("arrival window must be > 0");
  }
  void record(double now) { arrivals_.push_back(now); }
  /// Arrivals in (now - window, now]; older ones are dropped.
  std::size_t count(double now);
  double window() const { return window_; }

 private:
  double window_;
  std::deque<double> arrivals_;
};

/// What a smart packet observes at one hop: the decision node's view of the
/// edge it leaves by, plus the node's queue and hazard estimates.
struct HopObservation {
  double effective_length = 0.0;  // of the edge toward the next vertex
  NodeStats stats;
  double hazard_time = 0.0;  // t_haz at the node
  double growth_rate = 0.0;  // c at the node
};

/// A path (vertex ids, ending at the destination) with one observation per
/// non-terminal vertex.
struct PathObservation {
  std::vector<VertexId> path;
  std::vector<HopObservation> hops;
};

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct HopTerms {
  double first = 0.0;   // traversal (time) or lateness (safety)
  double second = 0.0;  // delay (time) or safety value (safety)
  double arrival = 0.0; // predicted arrival at the node
};

struct PathEvaluation {
  std::vector<VertexId> path;
  double value = 0.0;
  double congestion = 0.0;  // sum of the per-node delays
  std::vector<HopTerms> terms;
};

/// Predicted egress time: per hop the traversal E/V plus the queue delay at
/// the node. Arrival times thread through both terms, starting at
/// `start_time` at the first vertex.
PathEvaluation time_metric(const BuildingGraph& graph, const PathObservation& obs, double speed,
                           double start_time = 0.0);

/// Safety goal: per node, lateness behind the hazard times its growth rate,
/// plus the edge's effective length as the safety value.
PathEvaluation safety_metric(const BuildingGraph& graph, const PathObservation& obs, double speed,
                             double start_time = 0.0);

/// Same evaluations over a suffix of the observation (hops [from, end)),
/// without graph checks. The caller guarantees the hops are consistent.
double time_metric_suffix(std::span<const HopObservation> hops, double speed, double* congestion);
double safety_metric_suffix(std::span<const HopObservation> hops, double speed, double* congestion);

}  // namespace evac
