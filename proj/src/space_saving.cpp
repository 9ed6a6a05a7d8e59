#include "hfsim/space_saving.hpp"

#include <algorithm>
#include <cassert>

namespace hfsim {

SpaceSaving::SpaceSaving(size_t capacity) : capacity_(capacity) { assert(capacity >= 1); }

std::optional<FlowKey> SpaceSaving::insert(const FlowKey& key, double weight) {
  assert(weight > 0);
  total_ += weight;
  ++tick_;

  auto it = slots_.find(key);
  if (it != slots_.end()) {
    Slot& slot = it->second;
    order_.erase(slot.order_it);
    slot.entry.count += weight;
    slot.touched = tick_;
    slot.order_it = order_.emplace(std::make_pair(slot.entry.count, tick_), key);
    return std::nullopt;
  }

  std::optional<FlowKey> evicted;
  double inherited = 0;
  if (slots_.size() >= capacity_) {
    auto min_it = order_.begin();
    evicted = min_it->second;
    inherited = min_it->first.first;
    slots_.erase(*evicted);
    order_.erase(min_it);
  }

  Slot slot;
  slot.entry.count = inherited + weight;
  slot.entry.overestimate = inherited;
  slot.touched = tick_;
  slot.order_it = order_.emplace(std::make_pair(slot.entry.count, tick_), key);
  slots_.emplace(key, slot);
  return evicted;
}

const SpaceSaving::Entry* SpaceSaving::find(const FlowKey& key) const {
  auto it = slots_.find(key);
  return it == slots_.end() ? nullptr : &it->second.entry;
}

double SpaceSaving::estimate(const FlowKey& key) const {
  const Entry* e = find(key);
  return e ? e->count : 0.0;
}

double SpaceSaving::min_count() const {
  return order_.empty() ? 0.0 : order_.begin()->first.first;
}

std::vector<std::pair<FlowKey, SpaceSaving::Entry>> SpaceSaving::query(double theta) const {
  assert(theta > 0 && theta <= 1);
  double bar = theta * total_;
  std::vector<std::pair<FlowKey, Entry>> out;
  for (const auto& [key, slot] : slots_)
    if (slot.entry.count >= bar) out.emplace_back(key, slot.entry);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.first < b.first;
  });
  return out;
}

std::vector<std::pair<FlowKey, SpaceSaving::Entry>> SpaceSaving::entries_snapshot() const {
  std::vector<std::pair<FlowKey, Entry>> out;
  out.reserve(slots_.size());
  for (const auto& [key, slot] : slots_) out.emplace_back(key, slot.entry);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace hfsim
