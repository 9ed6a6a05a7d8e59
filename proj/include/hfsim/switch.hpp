#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hfsim/flow.hpp"
#include "hfsim/sampling.hpp"
#include "hfsim/time.hpp"

namespace hfsim {

struct DuplicateRule : std::runtime_error {
  explicit DuplicateRule(const std::string& what) : std::runtime_error(what) {}
};
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class PipelineAction { Counted, Sampled, Passed };

struct FlowRule {
  uint64_t id = 0;
  int priority = 0;
  FlowKey match;  // count rules are exact-match; the sample rule is implicit
  uint64_t packets = 0;
  uint64_t bytes = 0;
  VirtualTime last_hit;
};

struct SwitchStats {
  uint64_t packets_processed = 0;
  uint64_t packet_in_count = 0;
  uint64_t packet_in_bytes = 0;
  uint64_t flowmod_count = 0;  // 108-byte rule FlowMods (installs + pattern rotations)
  uint64_t flowmod_bytes = 0;
  uint64_t meta_update_count = 0;  // 110-byte metadata FlowMods
  uint64_t meta_update_bytes = 0;
  uint64_t poll_reply_count = 0;
  uint64_t poll_reply_bytes = 0;  // 8 + 40 * rule_count per reply
};

struct CounterSnapshot {
  FlowKey key;
  uint64_t packets = 0;
  uint64_t bytes = 0;
};

// Whether a rule install is a controller FlowMod (accounted, 108 B) or a
// switch-local clone (the in-switch macro-rule path, no control traffic).
enum class InstallSource { Controller, SwitchLocal };

// Two-stage pipeline: exact-match counter rules above one catch-all
// sampling rule. Counter rules match first; only misses reach the sampler.
class Switch {
 public:
  static constexpr size_t kUnlimitedRules = SIZE_MAX;
  static constexpr size_t kBytesPerRule = 20;  // 13 B key + 7 B counters/metadata

  Switch(int id, size_t count_rule_cap, std::unique_ptr<Sampler> sampler);

  // Marked packets skip both stages. Unmarked packets are marked whenever
  // they are counted or traverse the sampling stage.
  PipelineAction process_packet(Packet& pkt);

  uint64_t install_count_rule(const FlowKey& key, VirtualTime now = VirtualTime(),
                              InstallSource source = InstallSource::Controller);
  bool has_rule(const FlowKey& key) const { return rules_.count(key) > 0; }

  // Cumulative counters of all count rules, sorted by key. Accounts the
  // multipart reply on the switch->controller direction.
  std::vector<CounterSnapshot> poll_counters();

  std::vector<FlowKey> expire_idle_rules(VirtualTime now, VirtualTime idle_timeout);

  void remove_rule(const FlowKey& key);

  size_t memory_usage() const;
  size_t count_rule_count() const { return rules_.size(); }
  size_t count_rule_cap() const { return cap_; }

  void fire_sampler_timers(VirtualTime now);

  int id() const { return id_; }
  const SwitchStats& stats() const { return stats_; }
  Sampler& sampler() { return *sampler_; }

 private:
  int id_;
  size_t cap_;
  std::unique_ptr<Sampler> sampler_;
  std::map<FlowKey, FlowRule> rules_;  // ordered for deterministic polling
  uint64_t next_rule_id_ = 1;
  SwitchStats stats_;
  ControlAccounting sampler_acct_;
};

}  // namespace hfsim
