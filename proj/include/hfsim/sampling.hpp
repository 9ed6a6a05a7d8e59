#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hfsim/flow.hpp"
#include "hfsim/rng.hpp"
#include "hfsim/time.hpp"

namespace hfsim {

struct SizeOutOfRange : std::runtime_error {
  explicit SizeOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

// Control-plane message sizes used by the accounting model.
constexpr uint32_t kFlowModBytes = 108;    // rule install / pattern rotation
constexpr uint32_t kMetaFlowModBytes = 110;  // metadata (r value) update
constexpr uint32_t kPacketInBytes = 68;    // sampled headers (40) + encapsulation (28)

// Ledger of controller<->switch message events; samplers report their
// rotation FlowMods here.
struct ControlAccounting {
  uint64_t flowmod_count = 0;   // 108-byte rule FlowMods
  uint64_t flowmod_bytes = 0;
  uint64_t meta_update_count = 0;  // 110-byte metadata FlowMods
  uint64_t meta_update_bytes = 0;

  void add_flowmod() {
    ++flowmod_count;
    flowmod_bytes += kFlowModBytes;
  }
  void add_meta_update() {
    ++meta_update_count;
    meta_update_bytes += kMetaFlowModBytes;
  }
  uint64_t controller_to_switch_bytes() const { return flowmod_bytes + meta_update_bytes; }
};

// --- Ternary match over the 16-bit checksum field -------------------------

struct TernaryPattern {
  uint16_t value = 0;
  uint16_t mask = 0;  // 1-bits are fixed positions
  int fixed_bits = 0;
};

// Uniformly random pattern with k fixed bit positions and values. Each call
// costs one FlowMod on the attached accounting ledger.
TernaryPattern rotate_pattern(int k, Rng& rng, ControlAccounting* acct = nullptr);

bool hash_match_sample(const Packet& pkt, const TernaryPattern& pat);

// --- Group-based packet sampling -------------------------------------------

struct WeightedGroup {
  uint64_t active_weight = 1;
  uint64_t dummy_weight = 0;

  // Buckets for probability p: active weight 1, dummy weight ceil(1/p)-1.
  static WeightedGroup for_probability(double p);
  double probability() const {
    return static_cast<double>(active_weight) /
           static_cast<double>(active_weight + dummy_weight);
  }
};

bool weighted_select_sample(const Packet& pkt, const WeightedGroup& group, Rng& rng);

// Chained round-robin groups; the packet advances to the next group only
// from the active (last) bucket, giving a 1/prod(sizes) rate.
struct RoundRobinChain {
  explicit RoundRobinChain(std::vector<uint64_t> group_sizes);
  std::vector<uint64_t> sizes;
  std::vector<uint64_t> cursors;
};

bool round_robin_sample(const Packet& pkt, RoundRobinChain& chain);

// --- Two-field comparison in a ternary table --------------------------------

// First-match rule table deciding x < s for b-bit operands; at most 2b+1
// rules, one fixed bit per operand per rule.
struct ComparisonRule {
  TernaryPattern x;
  TernaryPattern s;
  bool verdict = false;
};

struct ComparisonRuleset {
  int width = 0;  // operand width b
  std::vector<ComparisonRule> rules;

  bool less_than(uint16_t x, uint16_t s) const;
};

ComparisonRuleset build_comparison_ruleset(int b);

// --- Pseudo-byte sampling ----------------------------------------------------

enum class RoutePolicy {
  LogCeil,  // instance ceil(log2(size))
  ArgMin,   // closest geometric threshold
};

struct PseudoByteParams {
  double probability = 0.0;              // per-byte probability p
  std::vector<uint32_t> instance_sizes;  // geometric thresholds
  RoutePolicy policy = RoutePolicy::LogCeil;

  static PseudoByteParams for_probability(double p, uint32_t min_size = kMinPacketSize,
                                          uint32_t max_size = kMaxPacketSize);
};

// Geometric threshold series m*2^i for i in 1..R, R = ceil(log2(M/m)).
std::vector<uint32_t> geometric_instances(uint32_t min_size, uint32_t max_size);

// Returns the sampling-instance index z for a packet of `size` bytes: under
// LogCeil the exponent ceil(log2(size)), under ArgMin the exponent of the
// closest threshold (ties toward the smaller). Instance z samples with
// probability min(1, p * 2^z).
int pseudo_byte_route(uint32_t size, const PseudoByteParams& params);

// Uniform b-bit rotation value; costs one metadata FlowMod (<= 110 bytes).
uint16_t rotate_r(int b, Rng& rng, ControlAccounting* acct = nullptr);

// Samples iff ((top b bits of checksum) xor r) < size. The decision is
// produced by `rules` (built for width b); size >= 2^b always samples.
bool hash_compare_sample(const Packet& pkt, int b, uint16_t r,
                         const ComparisonRuleset& rules);

// --- Pipeline-facing sampler interface ---------------------------------------

class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual bool sample(const Packet& pkt) = 0;
  // Periodic rotation hook; fires zero or more times per call.
  virtual void on_timer(VirtualTime /*now*/, ControlAccounting& /*acct*/) {}
  virtual double nominal_probability() const = 0;
  virtual size_t memory_overhead_bytes() const = 0;
};

struct SamplerParams {
  enum class Kind { Weighted, RoundRobin, HashMatch, PseudoByteRouter, HashCompare };
  Kind kind = Kind::Weighted;
  double probability = 1.0;              // p; power of two for hash samplers
  std::vector<uint64_t> group_sizes;     // round-robin chain
  VirtualTime rotate_interval;           // zero disables rotation
  RoutePolicy route_policy = RoutePolicy::LogCeil;
  uint64_t seed = 0;
};

std::unique_ptr<Sampler> make_sampler(const SamplerParams& params);

// b = log2(1/p); p must be an exact power of two.
int probability_to_bits(double p);

// Worst-case window, in seconds, during which packets crafted around one
// fixed hash pattern can evade sampling before a rotation replaces it:
// 1/(p*R) for rotation rate R per second. Accounting figure only.
inline double evasion_window_seconds(double p, double rotations_per_second) {
  return 1.0 / (p * rotations_per_second);
}

}  // namespace hfsim
