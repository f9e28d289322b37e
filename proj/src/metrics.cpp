#include "evac/metrics.hpp"

#include <algorithm>

namespace evac {

double little_delay(const NodeStats& stats, double t_i) {
  if (stats.arrival_rate <= 0.0) return 0.0;
  const double delay =
      (stats.queue_length + t_i * (stats.arrival_rate - stats.departure_rate)) / stats.arrival_rate;
  return std::max(0.0, delay);
}

NodeStats update_arrival_rate(NodeStats stats, std::size_t arrivals_in_window) {
  if (!(stats.window > 0.0)) throw std::invalid_argument("arrival window must be > 0");
  stats.arrival_rate = static_cast<double>(arrivals_in_window) / stats.window;
  return stats;
}

std::size_t ArrivalWindow::count(double now) {
  while (!arrivals_.empty() && arrivals_.front() <= now - window_) arrivals_.pop_front();
  return arrivals_.size();
}

namespace {

enum class Goal { Time, Safety };

template <typename Sink>
double accumulate(Goal goal, std::span<const HopObservation> hops, double speed, double start,
                  double& congestion, Sink&& sink) {
  double total = 0.0;
  double t = start;
  congestion = 0.0;
  for (const HopObservation& hop : hops) {
    const double traversal = hop.effective_length / speed;
    const double delay = little_delay(hop.stats, t);
    congestion += delay;
    HopTerms terms;
    terms.arrival = t;
    if (goal == Goal::Time) {
      terms.first = traversal;
      terms.second = delay;
    } else {
      terms.first = std::max(0.0, t - hop.hazard_time) * hop.growth_rate;
      terms.second = hop.effective_length;
    }
    total += terms.first + terms.second;
    sink(terms);
    t += delay + traversal;
  }
  return total;
}

PathEvaluation evaluate(Goal goal, const BuildingGraph& graph, const PathObservation& obs,
                        double speed, double start) {
  if (!(speed > 0.0)) throw MetricError("evacuee speed must be > 0");
  if (obs.path.size() < 2) throw MetricError("path needs at least two vertices");
  if (obs.hops.size() + 1 != obs.path.size()) {
    throw MetricError("expected one hop observation per non-terminal vertex");
  }
  for (std::size_t i = 0; i + 1 < obs.path.size(); ++i) {
    if (!graph.has_vertex(obs.path[i]) || !graph.has_vertex(obs.path[i + 1]) ||
        graph.edge_between(graph.vertex_index(obs.path[i]), graph.vertex_index(obs.path[i + 1])) ==
            BuildingGraph::npos) {
      throw MetricError("vertices " + std::to_string(obs.path[i]) + " and " +
                        std::to_string(obs.path[i + 1]) + " are not adjacent");
    }
  }
  PathEvaluation eval;
  eval.path = obs.path;
  eval.terms.reserve(obs.hops.size());
  eval.value = accumulate(goal, obs.hops, speed, start, eval.congestion,
                          [&](const HopTerms& t) { eval.terms.push_back(t); });
  return eval;
}

}  // namespace

PathEvaluation time_metric(const BuildingGraph& graph, const PathObservation& obs, double speed,
                           double start_time) {
  return evaluate(Goal::Time, graph, obs, speed, start_time);
}

PathEvaluation safety_metric(const BuildingGraph& graph, const PathObservation& obs, double speed,
                             double start_time) {
  return evaluate(Goal::Safety, graph, obs, speed, start_time);
}

double time_metric_suffix(std::span<const HopObservation> hops, double speed, double* congestion) {
  double c = 0.0;
  const double g = accumulate(Goal::Time, hops, speed, 0.0, c, [](const HopTerms&) {});
  if (congestion) *congestion = c;
  return g;
}

double safety_metric_suffix(std::span<const HopObservation> hops, double speed,
                            double* congestion) {
  double c = 0.0;
  const double g = accumulate(Goal::Safety, hops, speed, 0.0, c, [](const HopTerms&) {});
  if (congestion) *congestion = c;
  return g;
}

}  // namespace evac
