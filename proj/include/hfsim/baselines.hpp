#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "hfsim/controller.hpp"
#include "hfsim/flow.hpp"
#include "hfsim/space_saving.hpp"
#include "hfsim/switch.hpp"

namespace hfsim {

// Sample&Hold reference point: every newly sampled flow gets a count rule,
// cloned switch-locally (no FlowMod traffic, no install latency, no cap).
// The controller only reads the counters back at interval ends.
class HoldController {
 public:
  explicit HoldController(double sample_probability)
      : sample_probability_(sample_probability) {}

  // Returns the key to install if this flow has no rule yet.
  std::optional<FlowKey> on_sample(const Packet& pkt);

  void on_poll(std::span<const CounterSnapshot> snapshot);

  // Heavy = estimate >= T * observed_total; the estimate is the exact
  // counter plus 1/p for the pre-install packets behind the trigger sample.
  std::vector<HeavyReportEntry> report_heavy(double heavy_threshold,
                                             double observed_total) const;

  size_t installed_count() const { return installed_.size(); }

 private:
  double sample_probability_;
  std::set<FlowKey> installed_;
  std::map<FlowKey, uint64_t> counters_;
};

// Sample&HH reference point: samples only, no switch state at all.
class HHOnlyController {
 public:
  HHOnlyController(size_t hh_capacity, double sample_probability)
      : hh_(hh_capacity), sample_probability_(sample_probability) {}

  void on_sample(const Packet& pkt);

  std::vector<HeavyReportEntry> report_heavy(double heavy_threshold) const;

  double total() const { return total_; }
  const SpaceSaving& hh() const { return hh_; }

 private:
  SpaceSaving hh_;
  double sample_probability_;
  double total_ = 0;
};

}  // namespace hfsim
