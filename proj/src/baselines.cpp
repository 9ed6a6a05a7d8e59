#include "hfsim/baselines.hpp"

#include <algorithm>

namespace hfsim {

std::optional<FlowKey> HoldController::on_sample(const Packet& pkt) {
  if (installed_.count(pkt.key)) return std::nullopt;
  installed_.insert(pkt.key);
  counters_[pkt.key] = 0;
  return pkt.key;
}

void HoldController::on_poll(std::span<const CounterSnapshot> snapshot) {
  for (const auto& row : snapshot) {
    auto it = counters_.find(row.key);
    if (it != counters_.end()) it->second = row.packets;
  }
}

std::vector<HeavyReportEntry> HoldController::report_heavy(double heavy_threshold,
                                                           double observed_total) const {
  std::vector<HeavyReportEntry> out;
  double bar = heavy_threshold * observed_total;
  for (const auto& [key, count] : counters_) {
    double estimate = static_cast<double>(count) + 1.0 / sample_probability_;
    if (estimate < bar) continue;
    HeavyReportEntry row;
    row.key = key;
    row.hh_count = estimate * sample_probability_;
    row.fraction = observed_total > 0 ? estimate / observed_total : 0;
    row.estimated_volume = estimate;
    row.mode = EstimateMode::ExactCounted;
    out.push_back(row);
  }
  std::sort(out.begin(), out.end(), [](const HeavyReportEntry& a, const HeavyReportEntry& b) {
    if (a.estimated_volume != b.estimated_volume)
      return a.estimated_volume > b.estimated_volume;
    return a.key < b.key;
  });
  return out;
}

void HHOnlyController::on_sample(const Packet& pkt) {
  hh_.insert(pkt.key, 1.0);
  total_ += 1.0;
}

std::vector<HeavyReportEntry> HHOnlyController::report_heavy(double heavy_threshold) const {
  std::vector<HeavyReportEntry> out;
  if (total_ <= 0) return out;
  for (const auto& [key, entry] : hh_.query(heavy_threshold)) {
    HeavyReportEntry row;
    row.key = key;
    row.hh_count = entry.count;
    row.fraction = entry.count / total_;
    row.estimated_volume = entry.count / sample_probability_;
    row.mode = EstimateMode::SampledOnly;
    out.push_back(row);
  }
  return out;
}

}  // namespace hfsim
