#include "evac/mailbox.hpp"

#include <algorithm>
#include <stdexcept>

namespace evac::cpn {

const char* to_string(MetricClass c) { return c == MetricClass::Time ? "time" : "safety"; }

bool ranks_before(const MailboxEntry& a, const MailboxEntry& b) {
  if (a.goal != b.goal) return a.goal < b.goal;
  if (a.created_at != b.created_at) return a.created_at > b.created_at;
  return a.path < b.path;
}

Mailbox::Mailbox(std::size_t capacity, double expiry) : capacity_(capacity), expiry_(expiry) {
  if (capacity == 0) throw std::invalid_argument("mailbox capacity must be >= 1");
  if (!(expiry > 0.0)) throw std::invalid_argument("mailbox expiry must be > 0");
}

void Mailbox::expire(double now) {
  std::erase_if(entries_, [&](const MailboxEntry& e) { return now - e.created_at > expiry_; });
}

void Mailbox::insert(MailboxEntry entry, double now) {
  expire(now);
  std::erase_if(entries_, [&](const MailboxEntry& e) { return e.path == entry.path; });
  if (entries_.size() >= capacity_) {
    if (!ranks_before(entry, entries_.back())) return;
    entries_.pop_back();
  }
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), entry, ranks_before);
  entries_.insert(pos, std::move(entry));
}

const MailboxEntry* best_path(const Mailbox& mailbox) {
  return mailbox.empty() ? nullptr : &mailbox.entries().front();
}

const MailboxEntry* congestion_ease_path(const Mailbox& mailbox, double alpha) {
  if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
  const MailboxEntry* best = best_path(mailbox);
  if (!best) return nullptr;
  const double bound = alpha * best->goal;
  const MailboxEntry* pick = nullptr;
  // Entries are ranked by G, so the first minimum in scan order already has
  // the smaller G among congestion ties.
  for (const MailboxEntry& e : mailbox.entries()) {
    if (e.goal > bound) break;
    if (!pick || e.congestion < pick->congestion) pick = &e;
  }
  return pick;
}

}  // namespace evac::cpn
