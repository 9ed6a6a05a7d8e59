#include "hfsim/switch.hpp"

#include <cassert>

namespace hfsim {

Switch::Switch(int id, size_t count_rule_cap, std::unique_ptr<Sampler> sampler)
    : id_(id), cap_(count_rule_cap), sampler_(std::move(sampler)) {
  assert(sampler_);
}

PipelineAction Switch::process_packet(Packet& pkt) {
  ++stats_.packets_processed;
  if (pkt.mark) return PipelineAction::Passed;

  auto it = rules_.find(pkt.key);
  if (it != rules_.end()) {
    FlowRule& rule = it->second;
    rule.packets += 1;
    rule.bytes += pkt.size;
    rule.last_hit = pkt.time;
    pkt.mark = true;
    return PipelineAction::Counted;
  }

  pkt.mark = true;  // the sampling stage marks selected and unselected alike
  if (sampler_->sample(pkt)) {
    ++stats_.packet_in_count;
    stats_.packet_in_bytes += kPacketInBytes;
    return PipelineAction::Sampled;
  }
  return PipelineAction::Passed;
}

uint64_t Switch::install_count_rule(const FlowKey& key, VirtualTime now,
                                    InstallSource source) {
  if (rules_.count(key))
    throw DuplicateRule("count rule already installed for " + to_string(key));
  if (rules_.size() >= cap_)
    throw CapExceeded("count rule cap " + std::to_string(cap_) + " reached on switch " +
                      std::to_string(id_));
  FlowRule rule;
  rule.id = next_rule_id_++;
  rule.priority = 1;  // above the catch-all sample rule (priority 0)
  rule.match = key;
  rule.last_hit = now;  // idle tracking starts at install
  rules_.emplace(key, rule);
  if (source == InstallSource::Controller) {
    ++stats_.flowmod_count;
    stats_.flowmod_bytes += kFlowModBytes;
  }
  return rule.id;
}

std::vector<CounterSnapshot> Switch::poll_counters() {
  std::vector<CounterSnapshot> out;
  out.reserve(rules_.size());
  for (const auto& [key, rule] : rules_) out.push_back({key, rule.packets, rule.bytes});
  ++stats_.poll_reply_count;
  stats_.poll_reply_bytes += 8 + 40 * rules_.size();
  return out;
}

std::vector<FlowKey> Switch::expire_idle_rules(VirtualTime now, VirtualTime idle_timeout) {
  assert(idle_timeout.micros() > 0);
  std::vector<FlowKey> removed;
  for (auto it = rules_.begin(); it != rules_.end();) {
    if (now - it->second.last_hit > idle_timeout) {
      removed.push_back(it->first);
      it = rules_.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

void Switch::remove_rule(const FlowKey& key) { rules_.erase(key); }

size_t Switch::memory_usage() const {
  return rules_.size() * kBytesPerRule + sampler_->memory_overhead_bytes();
}

void Switch::fire_sampler_timers(VirtualTime now) {
  ControlAccounting before = sampler_acct_;
  sampler_->on_timer(now, sampler_acct_);
  stats_.flowmod_count += sampler_acct_.flowmod_count - before.flowmod_count;
  stats_.flowmod_bytes += sampler_acct_.flowmod_bytes - before.flowmod_bytes;
  stats_.meta_update_count += sampler_acct_.meta_update_count - before.meta_update_count;
  stats_.meta_update_bytes += sampler_acct_.meta_update_bytes - before.meta_update_bytes;
}

}  // namespace hfsim
