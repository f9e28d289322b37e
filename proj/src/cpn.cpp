#include "evac/cpn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evac::cpn {

int default_hop_budget(std::size_t vertex_count) {
  const int scaled = static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(vertex_count))));
  return std::max(30, scaled);
}

std::optional<std::size_t> sp_next_hop(const RnnDecider& decider, const BuildingGraph& graph,
                                       std::size_t current, std::span<const char> visited,
                                       double exploration, Rng& rng) {
  const auto adjacent = graph.neighbors(current);
  std::vector<char> allowed(adjacent.size(), 0);
  std::size_t open = 0;
  for (std::size_t slot = 0; slot < adjacent.size(); ++slot) {
    if (!visited[adjacent[slot].vertex]) {
      allowed[slot] = 1;
      ++open;
    }
  }
  const bool explore = rng.uniform() < exploration;
  if (open == 0) return std::nullopt;
  if (explore) {
    std::size_t pick = rng.below(open);
    for (std::size_t slot = 0; slot < allowed.size(); ++slot) {
      if (allowed[slot] && pick-- == 0) return slot;
    }
  }
  const std::size_t best = decider.best(allowed);
  const double top = decider.excitation()[best];
  for (std::size_t slot = 0; slot < adjacent.size(); ++slot) {
    if (allowed[slot] && graph.vertex(adjacent[slot].vertex).is_exit &&
        decider.excitation()[slot] == top) {
      return slot;
    }
  }
  return best;
}

CpnNetwork::CpnNetwork(const BuildingGraph& graph, CpnParams params)
    : graph_(&graph),
      params_(params),
      hop_budget_(params.hop_budget >= 0 ? params.hop_budget
                                        : default_hop_budget(graph.vertex_count())),
      visited_(graph.vertex_count(), 0) {
  if (params.exploration < 0.0 || params.exploration > 1.0) {
    throw std::invalid_argument("exploration rate must lie in [0,1]");
  }
  if (!(params.time_speed > 0.0) || !(params.safety_speed > 0.0)) {
    throw std::invalid_argument("metric speeds must be > 0");
  }
  snapshots_.reserve(graph.vertex_count());
  nodes_.reserve(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto adjacent = graph.neighbors(v);
    NodeSnapshot snap;
    for (const Adjacent& a : adjacent) snap.effective_length.push_back(graph.edge(a.edge).length);
    snapshots_.push_back(std::move(snap));
    nodes_.push_back(CpnNode{
        {Mailbox(params.mailbox_capacity, params.mailbox_expiry),
         Mailbox(params.mailbox_capacity, params.mailbox_expiry)},
        {RnnDecider(adjacent.size(), params.rnn), RnnDecider(adjacent.size(), params.rnn)}});
  }
}

double CpnNetwork::goal(MetricClass metric, std::span<const HopObservation> hops,
                        double* congestion) const {
  return metric == MetricClass::Time ? time_metric_suffix(hops, params_.time_speed, congestion)
                                     : safety_metric_suffix(hops, params_.safety_speed, congestion);
}

std::optional<AckPacket> CpnNetwork::launch_sp(std::size_t source, MetricClass metric, Rng& rng) {
  const BuildingGraph& g = *graph_;
  if (g.vertex(source).is_exit) throw std::invalid_argument("smart packets start at a non-exit");
  ++stats_.launched;

  SmartPacket sp;
  sp.source = g.vertex(source).id;
  sp.metric = metric;
  sp.hop_budget = hop_budget_;
  sp.age_budget = params_.age_budget;
  sp.visited.push_back(sp.source);

  std::vector<std::size_t> walked{source};
  visited_[source] = 1;
  std::size_t current = source;
  bool lost = false;
  while (!g.vertex(current).is_exit) {
    if (static_cast<int>(sp.measurements.size()) >= sp.hop_budget ||
        sp.age + params_.hop_latency > sp.age_budget) {
      lost = true;
      break;
    }
    const auto slot = sp_next_hop(nodes_[current].deciders[cpn::slot(metric)], g, current,
                                  visited_, params_.exploration, rng);
    if (!slot) {
      lost = true;
      break;
    }
    const NodeSnapshot& snap = snapshots_[current];
    sp.measurements.push_back(
        {snap.effective_length[*slot], snap.stats, snap.hazard_time, snap.growth_rate});
    sp.age += params_.hop_latency;
    current = g.neighbors(current)[*slot].vertex;
    visited_[current] = 1;
    walked.push_back(current);
    sp.visited.push_back(g.vertex(current).id);
  }
  for (std::size_t v : walked) visited_[v] = 0;

  if (lost) {
    ++stats_.dropped;
    return std::nullopt;
  }
  ++stats_.delivered;
  AckPacket ack;
  ack.metric = metric;
  ack.goal = goal(metric, sp.measurements);
  ack.reverse_path.assign(sp.visited.rbegin(), sp.visited.rend());
  ack.measurements = std::move(sp.measurements);
  return ack;
}

bool CpnNetwork::on_ack(std::size_t vertex, const AckPacket& ack, double now) {
  const BuildingGraph& g = *graph_;
  const VertexId id = g.vertex(vertex).id;
  const auto& rev = ack.reverse_path;
  auto it = std::find(rev.begin(), rev.end(), id);
  if (it == rev.end()) {
    ++stats_.acks_lost;
    return false;
  }
  // Forward position of this node on the path.
  const std::size_t pos = static_cast<std::size_t>(rev.end() - it) - 1;
  if (pos + 1 >= rev.size()) return true;  // the exit itself keeps no route

  const auto suffix = std::span<const HopObservation>(ack.measurements).subspan(pos);
  MailboxEntry entry;
  entry.goal = goal(ack.metric, suffix, &entry.congestion);
  entry.created_at = now;
  entry.path.assign(std::make_reverse_iterator(it + 1), rev.rend());

  const VertexId next = entry.path[1];
  std::size_t chosen = RnnDecider::npos;
  const auto adjacent = g.neighbors(vertex);
  for (std::size_t s = 0; s < adjacent.size(); ++s) {
    if (g.vertex(adjacent[s].vertex).id == next) chosen = s;
  }
  if (chosen == RnnDecider::npos) {
    ++stats_.acks_lost;
    return false;
  }
  const double reward = 1.0 / entry.goal;
  CpnNode& node = nodes_[vertex];
  node.mailboxes[slot(ack.metric)].insert(std::move(entry), now);
  node.deciders[slot(ack.metric)].reward(chosen, reward);
  return true;
}

void CpnNetwork::deliver_ack(const AckPacket& ack, double now) {
  const BuildingGraph& g = *graph_;
  for (std::size_t i = 1; i < ack.reverse_path.size(); ++i) {
    on_ack(g.vertex_index(ack.reverse_path[i]), ack, now);
  }
}

bool CpnNetwork::explore(std::size_t source, MetricClass metric, double now, Rng& rng) {
  auto ack = launch_sp(source, metric, rng);
  if (!ack) return false;
  deliver_ack(*ack, now);
  return true;
}

void CpnNetwork::expire(double now) {
  for (CpnNode& node : nodes_) {
    for (Mailbox& mb : node.mailboxes) mb.expire(now);
  }
}

}  // namespace evac::cpn
