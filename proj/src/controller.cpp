#include "hfsim/controller.hpp"

#include <algorithm>
#include <cassert>

namespace hfsim {

void PickConfig::validate() const {
  if (!(suspect_threshold > 0) || !(suspect_threshold < heavy_threshold) ||
      !(heavy_threshold <= 1))
    throw std::invalid_argument("pick: need 0 < t < T <= 1");
  if (!(sample_probability > 0) || !(sample_probability <= 1))
    throw std::invalid_argument("pick: p must be in (0,1]");
  if (hh_capacity < 2) throw std::invalid_argument("pick: v must be >= 2");
  if (poll_interval.micros() <= 0)
    throw std::invalid_argument("pick: poll interval must be positive");
}

DeriveResult derive_params(double heavy_threshold, double sample_probability,
                           double stream_length, std::optional<double> chosen_t) {
  assert(heavy_threshold > 0 && heavy_threshold <= 1);
  assert(sample_probability > 0 && sample_probability < 1);
  assert(stream_length >= 1);

  const double T = heavy_threshold;
  const double p = sample_probability;
  const double N = stream_length;

  DeriveResult out;
  out.heavy_threshold_min = 9.0 * (1.0 - p) / (N * p);
  out.feasible = T > out.heavy_threshold_min;
  out.t_max = T - 3.0 * std::sqrt(T * (1.0 - p)) / std::sqrt(N * p);
  double t = chosen_t.value_or(out.t_max);
  if (out.feasible && t > 0)
    out.v_min = static_cast<size_t>(std::ceil(2.0 / t - 1e-9));
  return out;
}

PickController::PickController(PickConfig cfg) : cfg_(cfg), hh_(cfg.hh_capacity) {
  cfg_.validate();
}

std::optional<FlowKey> PickController::on_sample(const Packet& pkt) {
  double w = weight_of(pkt);
  raw_sample_weight_ += static_cast<uint64_t>(w);
  auto evicted = hh_.insert(pkt.key, w);
  if (evicted && installed_.count(*evicted)) ++installed_evictions_;

  if (installed_.count(pkt.key)) return std::nullopt;  // pipeline normally prevents this
  if (installed_.size() >= cfg_.install_cap()) return std::nullopt;
  if (hh_.estimate(pkt.key) < cfg_.suspect_threshold * total()) return std::nullopt;

  installed_.insert(pkt.key);
  store_[pkt.key] = 0;
  pre_install_[pkt.key] = hh_.estimate(pkt.key);
  return pkt.key;
}

void PickController::on_poll(std::span<const CounterSnapshot> snapshot) {
  for (const auto& row : snapshot) {
    auto it = store_.find(row.key);
    if (it == store_.end()) continue;  // expired and not re-suspected
    uint64_t cumulative = cfg_.mode == CountMode::Packets ? row.packets : row.bytes;
    if (cumulative < it->second)
      throw NegativeDelta("counter for " + to_string(row.key) + " went backwards");
    uint64_t delta = cumulative - it->second;
    it->second = cumulative;
    if (delta == 0) continue;
    polled_delta_weight_ += delta;
    auto evicted =
        hh_.insert(row.key, static_cast<double>(delta) * cfg_.sample_probability);
    if (evicted && installed_.count(*evicted)) ++installed_evictions_;
  }
}

void PickController::on_rule_expired(const FlowKey& key) {
  installed_.erase(key);
  store_.erase(key);
  pre_install_.erase(key);
  // The flow's heavy-hitters entry is left to decay; re-suspicion re-installs.
}

double PickController::total() const {
  return static_cast<double>(raw_sample_weight_) +
         cfg_.sample_probability * static_cast<double>(polled_delta_weight_);
}

std::vector<HeavyReportEntry> PickController::report_heavy() const {
  double tot = total();
  std::vector<HeavyReportEntry> out;
  if (tot <= 0) return out;
  for (const auto& [key, entry] : hh_.query(cfg_.heavy_threshold)) {
    HeavyReportEntry row;
    row.key = key;
    row.hh_count = entry.count;
    row.fraction = entry.count / tot;
    auto stored = store_.find(key);
    if (stored != store_.end()) {
      auto pre = pre_install_.find(key);
      double pre_est = pre == pre_install_.end() ? 0.0 : pre->second;
      row.estimated_volume =
          static_cast<double>(stored->second) + pre_est / cfg_.sample_probability;
      row.mode = EstimateMode::ExactCounted;
    } else {
      row.estimated_volume = entry.count / cfg_.sample_probability;
      row.mode = EstimateMode::SampledOnly;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace hfsim
