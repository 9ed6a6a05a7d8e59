#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hfsim/flow.hpp"

namespace hfsim {

// Windowed variant of the top-k structure: each tracked flow keeps a ring of
// r slot counters plus an accumulative counter equal to their sum. Each
// sub-interval one slot is active; advancing drains the slot that is about
// to become active. Eviction is decided by the accumulative counter, so the
// structure behaves like the plain one over the trailing full window.
class IntervalHH {
 public:
  IntervalHH(size_t capacity, size_t slot_count);

  // Adds weight to the active slot of `key`; evicts the minimum-accum entry
  // at capacity. The newcomer inherits the evicted accum in its active slot.
  // Returns the evicted key, if any.
  std::optional<FlowKey> insert(const FlowKey& key, double weight);

  // One sub-interval boundary: rotate the active slot and drain it. The
  // driver must call this exactly once per boundary.
  void advance();

  struct WindowCount {
    FlowKey key;
    double count = 0;
  };

  // Flows whose count over the last `sub_intervals` slots is at least
  // theta times the stream total over the same slots. Descending by count.
  std::vector<WindowCount> query_interval(size_t sub_intervals, double theta) const;

  // Absolute-threshold variant: windowed count >= min_count.
  std::vector<FlowKey> query_bulky(double min_count, size_t sub_intervals) const;

  double window_count(const FlowKey& key, size_t sub_intervals) const;
  double window_total(size_t sub_intervals) const;

  double accum(const FlowKey& key) const;  // full-window count, 0 if untracked
  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }
  size_t slot_count() const { return slots_per_entry_; }
  size_t active_slot() const { return active_; }

  std::vector<std::pair<FlowKey, double>> accum_snapshot() const;

 private:
  struct Entry {
    std::vector<double> slots;
    double accum = 0;
    uint64_t touched = 0;
    std::multimap<std::pair<double, uint64_t>, FlowKey>::iterator order_it;
  };

  double cyclic_sum(const std::vector<double>& slots, size_t sub_intervals) const;
  void reindex(Entry& entry, const FlowKey& key);

  size_t capacity_;
  size_t slots_per_entry_;
  size_t active_ = 0;
  uint64_t tick_ = 0;
  std::unordered_map<FlowKey, Entry> entries_;
  std::multimap<std::pair<double, uint64_t>, FlowKey> order_;  // by (accum, touched)
  std::vector<double> totals_;  // per-slot stream totals
  double totals_accum_ = 0;
};

}  // namespace hfsim
