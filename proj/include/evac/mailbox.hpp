#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evac/building_graph.hpp"

namespace evac::cpn {

enum class MetricClass { Time = 0, Safety = 1 };
inline constexpr std::size_t kMetricClasses = 2;

inline std::size_t slot(MetricClass c) { return static_cast<std::size_t>(c); }
const char* to_string(MetricClass c);

struct MailboxEntry {
  std::vector<VertexId> path;  // owning node first, exit last
  double goal = 0.0;           // G, lower is better
  double congestion = 0.0;     // summed predicted queue delay along the path, s
  double created_at = 0.0;     // s
};

/// Ranking used everywhere: ascending G, then newest, then lexicographic path.
bool ranks_before(const MailboxEntry& a, const MailboxEntry& b);

/// Bounded store of path measurements for one metric class, kept ranked.
/// A path is held at most once; a fresh measurement replaces the old one.
class Mailbox {
 public:
  explicit Mailbox(std::size_t capacity = 10, double expiry = 60.0);

  /// Drops expired entries, then inserts; at capacity the worst of the
  /// existing entries and the new one is discarded.
  void insert(MailboxEntry entry, double now);

  /// Removes entries older than the expiry window.
  void expire(double now);

  std::span<const MailboxEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }
  double expiry() const { return expiry_; }

 private:
  std::size_t capacity_;
  double expiry_;
  std::vector<MailboxEntry> entries_;
};

/// Highest-ranked entry, or nullptr when empty.
const MailboxEntry* best_path(const Mailbox& mailbox);

/// Among entries whose G is within `alpha` times the best G, the one with the
/// least predicted congestion (smaller G, then rank, on ties).
const MailboxEntry* congestion_ease_path(const Mailbox& mailbox, double alpha);

}  // namespace evac::cpn
