#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hfsim/flow.hpp"

namespace hfsim {

// Bounded top-k counter structure: at capacity the minimum-count entry is
// evicted and its count seeds the newcomer, so every tracked key satisfies
// true <= reported <= true + N/v. Weights may be fractional (scaled poll
// deltas are fed back through the same structure).
class SpaceSaving {
 public:
  struct Entry {
    double count = 0;
    double overestimate = 0;  // evicted count inherited at insertion
  };

  explicit SpaceSaving(size_t capacity);

  // Returns the key evicted to make room, if any.
  std::optional<FlowKey> insert(const FlowKey& key, double weight);

  const Entry* find(const FlowKey& key) const;
  double estimate(const FlowKey& key) const;  // 0 when untracked

  // Entries with count >= theta * N, descending by count, ties by key.
  std::vector<std::pair<FlowKey, Entry>> query(double theta) const;

  double total_weight() const { return total_; }  // N
  size_t size() const { return slots_.size(); }
  size_t capacity() const { return capacity_; }
  double min_count() const;

  std::vector<std::pair<FlowKey, Entry>> entries_snapshot() const;

 private:
  struct Slot {
    Entry entry;
    uint64_t touched = 0;  // update sequence, for least-recently-updated ties
    std::multimap<std::pair<double, uint64_t>, FlowKey>::iterator order_it;
  };

  size_t capacity_;
  double total_ = 0;
  uint64_t tick_ = 0;
  std::unordered_map<FlowKey, Slot> slots_;
  // Ordered by (count, touched): begin() is the minimum count, oldest first.
  std::multimap<std::pair<double, uint64_t>, FlowKey> order_;
};

}  // namespace hfsim
