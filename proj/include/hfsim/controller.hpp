#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "hfsim/flow.hpp"
#include "hfsim/space_saving.hpp"
#include "hfsim/switch.hpp"
#include "hfsim/time.hpp"

namespace hfsim {

struct NegativeDelta : std::runtime_error {
  explicit NegativeDelta(const std::string& what) : std::runtime_error(what) {}
};

enum class CountMode { Packets, Bytes };

struct PickConfig {
  double heavy_threshold = 0.0;    // T
  double suspect_threshold = 0.0;  // t, 0 < t < T <= 1
  double sample_probability = 0.0;
  size_t hh_capacity = 0;  // v; v >= 2/t recommended
  VirtualTime poll_interval = VirtualTime::from_seconds(0.1);
  CountMode mode = CountMode::Packets;

  void validate() const;
  size_t install_cap() const {  // ceil(1/t)
    return static_cast<size_t>(std::ceil(1.0 / suspect_threshold - 1e-9));
  }
  bool capacity_sufficient() const {
    return static_cast<double>(hh_capacity) >= 2.0 / suspect_threshold;
  }
};

enum class EstimateMode { SampledOnly, ExactCounted };

struct HeavyReportEntry {
  FlowKey key;
  double hh_count = 0;          // weight inside the heavy-hitters structure
  double fraction = 0;          // hh_count / total
  double estimated_volume = 0;  // estimated true packets (or bytes)
  EstimateMode mode = EstimateMode::SampledOnly;
};

// Parameter derivation for a target heavy threshold T, sampling probability
// p and stream length N:
//   t_max = T - 3*sqrt(T(1-p))/sqrt(Np)
//   T_min = 9(1-p)/(Np), feasible iff T > T_min
//   v_min = ceil(2/t) for the chosen t (t_max unless overridden)
struct DeriveResult {
  double t_max = 0;
  double heavy_threshold_min = 0;  // T_min
  size_t v_min = 0;
  bool feasible = false;
};

DeriveResult derive_params(double heavy_threshold, double sample_probability, double stream_length,
                           std::optional<double> chosen_t = std::nullopt);

// Sample&Pick control logic: suspects past t get exact count rules, polled
// deltas are fed back into the heavy-hitters structure scaled by p, and the
// report lists flows past T relative to the total inserted weight.
class PickController {
 public:
  explicit PickController(PickConfig cfg);

  // Consumes a sampled packet-in; returns the key to install when the flow
  // crosses the suspect threshold.
  std::optional<FlowKey> on_sample(const Packet& pkt);

  // Feeds one aggregated poll snapshot back into the structure.
  void on_poll(std::span<const CounterSnapshot> snapshot);

  void on_rule_expired(const FlowKey& key);

  std::vector<HeavyReportEntry> report_heavy() const;

  // total == raw sample weight + p * polled delta weight, exactly.
  double total() const;

  const PickConfig& config() const { return cfg_; }
  const std::set<FlowKey>& installed() const { return installed_; }
  const SpaceSaving& hh() const { return hh_; }
  uint64_t installed_evictions() const { return installed_evictions_; }
  uint64_t raw_sample_weight() const { return raw_sample_weight_; }
  uint64_t polled_delta_weight() const { return polled_delta_weight_; }

 private:
  double weight_of(const Packet& pkt) const {
    return cfg_.mode == CountMode::Packets ? 1.0 : static_cast<double>(pkt.size);
  }

  PickConfig cfg_;
  SpaceSaving hh_;
  std::set<FlowKey> installed_;
  std::map<FlowKey, uint64_t> store_;        // last polled cumulative count per key
  std::map<FlowKey, double> pre_install_;    // hh weight captured at install time
  uint64_t raw_sample_weight_ = 0;
  uint64_t polled_delta_weight_ = 0;
  uint64_t installed_evictions_ = 0;
};

}  // namespace hfsim
