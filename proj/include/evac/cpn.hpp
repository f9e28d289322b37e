#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evac/building_graph.hpp"
#include "evac/mailbox.hpp"
#include "evac/metrics.hpp"
#include "evac/random.hpp"
#include "evac/rnn.hpp"

namespace evac::cpn {

struct CpnParams {
  RnnParams rnn;
  double exploration = 0.05;      // epsilon
  std::size_t mailbox_capacity = 10;
  double mailbox_expiry = 60.0;   // s
  int hop_budget = -1;            // negative picks max(30, ceil(4 sqrt|V|))
  double age_budget = 30.0;       // s
  double hop_latency = 0.05;      // s a smart packet spends per hop
  double time_speed = 130.0;      // cm/s assumed by the time metric
  double safety_speed = 80.0;     // cm/s assumed by the safety metric
};

int default_hop_budget(std::size_t vertex_count);

struct SmartPacket {
  VertexId source = 0;
  MetricClass metric = MetricClass::Time;
  std::vector<VertexId> visited;
  std::vector<HopObservation> measurements;
  int hop_budget = 0;
  double age_budget = 0.0;
  double age = 0.0;
};

struct AckPacket {
  MetricClass metric = MetricClass::Time;
  std::vector<VertexId> reverse_path;        // exit first
  std::vector<HopObservation> measurements;  // forward order, one per non-exit vertex
  double goal = 0.0;                         // G of the whole path
};

struct SpStatistics {
  std::uint64_t launched = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t acks_lost = 0;
};

/// Latest measurements a decision node makes available to passing packets.
struct NodeSnapshot {
  std::vector<double> effective_length;  // per adjacency slot
  NodeStats stats;
  double hazard_time = 1e9;
  double growth_rate = 0.0;
};

/// Per decision node: one mailbox and one learner for each metric class.
struct CpnNode {
  std::array<Mailbox, kMetricClasses> mailboxes;
  std::array<RnnDecider, kMetricClasses> deciders;
};

/// Next hop for a smart packet at `current`, as an adjacency slot, or empty
/// when every neighbour has been visited. Explores uniformly among the
/// unvisited neighbours with probability `exploration`, otherwise follows the
/// most excited neuron, preferring an unvisited exit among equally excited ones.
std::optional<std::size_t> sp_next_hop(const RnnDecider& decider, const BuildingGraph& graph,
                                       std::size_t current, std::span<const char> visited,
                                       double exploration, Rng& rng);

/// The cognitive packet network over a building graph.
class CpnNetwork {
 public:
  CpnNetwork(const BuildingGraph& graph, CpnParams params = {});

  const BuildingGraph& graph() const { return *graph_; }
  const CpnParams& params() const { return params_; }
  int hop_budget() const { return hop_budget_; }

  NodeSnapshot& snapshot(std::size_t vertex) { return snapshots_[vertex]; }
  const NodeSnapshot& snapshot(std::size_t vertex) const { return snapshots_[vertex]; }
  CpnNode& node(std::size_t vertex) { return nodes_[vertex]; }
  const CpnNode& node(std::size_t vertex) const { return nodes_[vertex]; }
  const Mailbox& mailbox(std::size_t vertex, MetricClass metric) const {
    return nodes_[vertex].mailboxes[slot(metric)];
  }
  const SpStatistics& statistics() const { return stats_; }

  /// Walks one smart packet from `source` (not an exit). Returns the ACK its
  /// destination would send, or nothing when the packet is lost.
  std::optional<AckPacket> launch_sp(std::size_t source, MetricClass metric, Rng& rng);

  /// Updates the mailbox and learner of one node from an ACK; returns false
  /// (and counts a lost ACK) when the node is not on the ACK's path.
  bool on_ack(std::size_t vertex, const AckPacket& ack, double now);

  /// Carries an ACK back along its path, updating every node it passes.
  void deliver_ack(const AckPacket& ack, double now);

  /// launch_sp followed by deliver_ack; true when an ACK came back.
  bool explore(std::size_t source, MetricClass metric, double now, Rng& rng);

  /// Expires stale mailbox entries everywhere.
  void expire(double now);

  double metric_speed(MetricClass metric) const {
    return metric == MetricClass::Time ? params_.time_speed : params_.safety_speed;
  }
  /// G of a measured path (or suffix) under the class's goal function.
  double goal(MetricClass metric, std::span<const HopObservation> hops,
              double* congestion = nullptr) const;

 private:
  const BuildingGraph* graph_;
  CpnParams params_;
  int hop_budget_;
  std::vector<NodeSnapshot> snapshots_;
  std::vector<CpnNode> nodes_;
  SpStatistics stats_;
  std::vector<char> visited_;
  std::vector<char> allowed_;
};

}  // namespace evac::cpn
