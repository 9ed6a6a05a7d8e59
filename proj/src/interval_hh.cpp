#include "hfsim/interval_hh.hpp"

#include <algorithm>
#include <cassert>

namespace hfsim {

IntervalHH::IntervalHH(size_t capacity, size_t slot_count)
    : capacity_(capacity), slots_per_entry_(slot_count), totals_(slot_count, 0.0) {
  assert(capacity >= 1);
  assert(slot_count >= 1);
}

void IntervalHH::reindex(Entry& entry, const FlowKey& key) {
  entry.touched = tick_;
  entry.order_it = order_.emplace(std::make_pair(entry.accum, tick_), key);
}

std::optional<FlowKey> IntervalHH::insert(const FlowKey& key, double weight) {
  assert(weight > 0);
  ++tick_;
  totals_[active_] += weight;
  totals_accum_ += weight;

  auto it = entries_.find(key);
  if (it != entries_.end()) {
    Entry& entry = it->second;
    order_.erase(entry.order_it);
    entry.slots[active_] += weight;
    entry.accum += weight;
    reindex(entry, key);
    return std::nullopt;
  }

  std::optional<FlowKey> evicted;
  double inherited = 0;
  if (entries_.size() >= capacity_) {
    auto min_it = order_.begin();
    evicted = min_it->second;
    inherited = min_it->first.first;
    entries_.erase(min_it->second);
    order_.erase(min_it);
  }

  Entry entry;
  entry.slots.assign(slots_per_entry_, 0.0);
  entry.slots[active_] = inherited + weight;
  entry.accum = inherited + weight;
  reindex(entry, key);
  entries_.emplace(key, std::move(entry));
  return evicted;
}

void IntervalHH::advance() {
  active_ = (active_ + 1) % slots_per_entry_;
  for (auto& [key, entry] : entries_) {
    if (entry.slots[active_] == 0) continue;
    order_.erase(entry.order_it);
    entry.accum -= entry.slots[active_];
    entry.slots[active_] = 0;
    entry.order_it = order_.emplace(std::make_pair(entry.accum, entry.touched), key);
  }
  totals_accum_ -= totals_[active_];
  totals_[active_] = 0;
}

double IntervalHH::cyclic_sum(const std::vector<double>& slots, size_t sub_intervals) const {
  assert(sub_intervals >= 1 && sub_intervals <= slots_per_entry_);
  double sum = 0;
  size_t idx = active_;
  for (size_t i = 0; i < sub_intervals; ++i) {
    sum += slots[idx];
    idx = (idx + slots_per_entry_ - 1) % slots_per_entry_;
  }
  return sum;
}

double IntervalHH::window_count(const FlowKey& key, size_t sub_intervals) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return 0;
  if (sub_intervals == slots_per_entry_) return it->second.accum;
  return cyclic_sum(it->second.slots, sub_intervals);
}

double IntervalHH::window_total(size_t sub_intervals) const {
  if (sub_intervals == slots_per_entry_) return totals_accum_;
  return cyclic_sum(totals_, sub_intervals);
}

std::vector<IntervalHH::WindowCount> IntervalHH::query_interval(size_t sub_intervals,
                                                                double theta) const {
  assert(theta > 0 && theta <= 1);
  double bar = theta * window_total(sub_intervals);
  std::vector<WindowCount> out;
  for (const auto& [key, entry] : entries_) {
    double c = (sub_intervals == slots_per_entry_) ? entry.accum
                                                   : cyclic_sum(entry.slots, sub_intervals);
    if (c >= bar) out.push_back({key, c});
  }
  std::sort(out.begin(), out.end(), [](const WindowCount& a, const WindowCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  return out;
}

std::vector<FlowKey> IntervalHH::query_bulky(double min_count, size_t sub_intervals) const {
  assert(min_count >= 0);
  std::vector<WindowCount> counts;
  for (const auto& [key, entry] : entries_) {
    double c = (sub_intervals == slots_per_entry_) ? entry.accum
                                                   : cyclic_sum(entry.slots, sub_intervals);
    if (c >= min_count) counts.push_back({key, c});
  }
  std::sort(counts.begin(), counts.end(), [](const WindowCount& a, const WindowCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  std::vector<FlowKey> out;
  out.reserve(counts.size());
  for (const auto& wc : counts) out.push_back(wc.key);
  return out;
}

double IntervalHH::accum(const FlowKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second.accum;
}

std::vector<std::pair<FlowKey, double>> IntervalHH::accum_snapshot() const {
  std::vector<std::pair<FlowKey, double>> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.emplace_back(key, entry.accum);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace hfsim
