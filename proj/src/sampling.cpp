#include "hfsim/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numeric>

namespace hfsim {

TernaryPattern rotate_pattern(int k, Rng& rng, ControlAccounting* acct) {
  assert(k >= 0 && k <= 16);
  // Partial Fisher-Yates over the 16 bit positions.
  int positions[16];
  std::iota(positions, positions + 16, 0);
  TernaryPattern pat;
  pat.fixed_bits = k;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.next_below(static_cast<uint64_t>(16 - i)));
    std::swap(positions[i], positions[j]);
    uint16_t bit = static_cast<uint16_t>(1u << positions[i]);
    pat.mask |= bit;
    if (rng.next_u64() & 1) pat.value |= bit;
  }
  if (acct) acct->add_flowmod();
  return pat;
}

bool hash_match_sample(const Packet& pkt, const TernaryPattern& pat) {
  return (pkt.checksum & pat.mask) == pat.value;
}

WeightedGroup WeightedGroup::for_probability(double p) {
  assert(p > 0 && p <= 1);
  WeightedGroup g;
  g.active_weight = 1;
  g.dummy_weight = static_cast<uint64_t>(std::ceil(1.0 / p - 1e-9)) - 1;
  return g;
}

bool weighted_select_sample(const Packet& pkt, const WeightedGroup& group, Rng& rng) {
  (void)pkt;
  uint64_t total = group.active_weight + group.dummy_weight;
  return rng.next_below(total) < group.active_weight;
}

RoundRobinChain::RoundRobinChain(std::vector<uint64_t> group_sizes)
    : sizes(std::move(group_sizes)), cursors(sizes.size(), 0) {
  assert(!sizes.empty());
  for (uint64_t s : sizes) {
    assert(s >= 1);
    (void)s;
  }
}

bool round_robin_sample(const Packet& pkt, RoundRobinChain& chain) {
  (void)pkt;
  // The packet proceeds along the chain only from the active (last) bucket
  // of each group.
  for (size_t i = 0; i < chain.sizes.size(); ++i) {
    uint64_t& cursor = chain.cursors[i];
    cursor = (cursor + 1) % chain.sizes[i];
    if (cursor != 0) return false;
  }
  return true;
}

bool ComparisonRuleset::less_than(uint16_t x, uint16_t s) const {
  for (const auto& rule : rules) {
    if ((x & rule.x.mask) == rule.x.value && (s & rule.s.mask) == rule.s.value)
      return rule.verdict;
  }
  return false;  // rule table always ends with a catch-all
}

ComparisonRuleset build_comparison_ruleset(int b) {
  assert(b >= 1 && b <= 16);
  ComparisonRuleset rs;
  rs.width = b;
  rs.rules.reserve(static_cast<size_t>(2 * b + 1));
  // Scan from the most significant bit; the first rule hit decides. Bits
  // above the first differing position match no rule, so priority order
  // realizes the lexicographic comparison.
  for (int i = b - 1; i >= 0; --i) {
    uint16_t bit = static_cast<uint16_t>(1u << i);
    rs.rules.push_back({{bit, bit, 1}, {0, bit, 1}, false});  // x_i=1, s_i=0 -> x > s
    rs.rules.push_back({{0, bit, 1}, {bit, bit, 1}, true});   // x_i=0, s_i=1 -> x < s
  }
  rs.rules.push_back({{0, 0, 0}, {0, 0, 0}, false});  // equal
  return rs;
}

std::vector<uint32_t> geometric_instances(uint32_t min_size, uint32_t max_size) {
  assert(min_size >= 1 && max_size >= min_size);
  std::vector<uint32_t> out;
  uint64_t s = min_size;
  while (s < max_size) {
    s *= 2;
    out.push_back(static_cast<uint32_t>(s));
  }
  return out;
}

PseudoByteParams PseudoByteParams::for_probability(double p, uint32_t min_size,
                                                   uint32_t max_size) {
  PseudoByteParams params;
  params.probability = p;
  params.instance_sizes = geometric_instances(min_size, max_size);
  return params;
}

int pseudo_byte_route(uint32_t size, const PseudoByteParams& params) {
  if (size < kMinPacketSize || size > kMaxPacketSize)
    throw SizeOutOfRange("packet size " + std::to_string(size) + " out of [64,1500]");
  if (params.policy == RoutePolicy::LogCeil)
    return std::bit_width(size - 1);  // ceil(log2(size))
  // Closest geometric threshold, ties toward the smaller instance.
  uint32_t best = params.instance_sizes.front();
  for (uint32_t cand : params.instance_sizes) {
    uint64_t d_best = best > size ? best - size : size - best;
    uint64_t d_cand = cand > size ? cand - size : size - cand;
    if (d_cand < d_best) best = cand;
  }
  return std::bit_width(best - 1);
}

uint16_t rotate_r(int b, Rng& rng, ControlAccounting* acct) {
  assert(b >= 0 && b <= 16);
  if (acct) acct->add_meta_update();
  if (b == 0) return 0;
  return static_cast<uint16_t>(rng.next_u64() & ((1u << b) - 1));
}

bool hash_compare_sample(const Packet& pkt, int b, uint16_t r,
                         const ComparisonRuleset& rules) {
  assert(rules.width == b);
  if (b == 0) return pkt.size > 0;
  if (pkt.size >= (1u << b)) return true;  // x < 2^b <= s
  uint16_t x = static_cast<uint16_t>(pkt.checksum >> (16 - b));
  return rules.less_than(static_cast<uint16_t>(x ^ r), static_cast<uint16_t>(pkt.size));
}

int probability_to_bits(double p) {
  for (int b = 0; b <= 16; ++b) {
    if (p == std::ldexp(1.0, -b)) return b;
  }
  throw std::invalid_argument("sampler probability must be 2^-k with k in [0,16]");
}

namespace {

constexpr size_t kGroupBytes = 16;
constexpr size_t kBucketBytes = 16;
constexpr size_t kTableEntryBytes = 20;

class WeightedSampler final : public Sampler {
 public:
  WeightedSampler(double p, uint64_t seed)
      : group_(WeightedGroup::for_probability(p)), rng_(seed) {}

  bool sample(const Packet& pkt) override { return weighted_select_sample(pkt, group_, rng_); }
  double nominal_probability() const override { return group_.probability(); }
  size_t memory_overhead_bytes() const override { return kGroupBytes + 2 * kBucketBytes; }

 private:
  WeightedGroup group_;
  Rng rng_;
};

class RoundRobinSampler final : public Sampler {
 public:
  explicit RoundRobinSampler(std::vector<uint64_t> sizes) : chain_(std::move(sizes)) {}

  bool sample(const Packet& pkt) override { return round_robin_sample(pkt, chain_); }
  double nominal_probability() const override {
    double prod = 1;
    for (uint64_t s : chain_.sizes) prod *= static_cast<double>(s);
    return 1.0 / prod;
  }
  size_t memory_overhead_bytes() const override {
    size_t bytes = 0;
    for (uint64_t s : chain_.sizes) bytes += kGroupBytes + s * kBucketBytes;
    return bytes;
  }

 private:
  RoundRobinChain chain_;
};

class HashMatchSampler final : public Sampler {
 public:
  HashMatchSampler(double p, VirtualTime rotate_interval, uint64_t seed)
      : fixed_bits_(probability_to_bits(p)),
        rotate_interval_(rotate_interval),
        next_rotation_(rotate_interval),
        rng_(seed) {
    pattern_ = rotate_pattern(fixed_bits_, rng_, nullptr);  // initial setup, not rotation
  }

  bool sample(const Packet& pkt) override { return hash_match_sample(pkt, pattern_); }

  void on_timer(VirtualTime now, ControlAccounting& acct) override {
    if (rotate_interval_.micros() <= 0) return;
    while (now >= next_rotation_) {
      pattern_ = rotate_pattern(fixed_bits_, rng_, &acct);
      next_rotation_ += rotate_interval_;
    }
  }

  double nominal_probability() const override { return std::ldexp(1.0, -fixed_bits_); }
  size_t memory_overhead_bytes() const override { return kTableEntryBytes; }

 private:
  int fixed_bits_;
  VirtualTime rotate_interval_;
  VirtualTime next_rotation_;
  Rng rng_;
  TernaryPattern pattern_;
};

// Pseudo-byte sampling via per-size-class packet samplers with geometric
// thresholds; instance z selects with probability min(1, p * 2^z).
class PseudoByteRouterSampler final : public Sampler {
 public:
  PseudoByteRouterSampler(double p, RoutePolicy policy, uint64_t seed)
      : params_(PseudoByteParams::for_probability(p)), rng_(seed) {
    params_.policy = policy;
  }

  bool sample(const Packet& pkt) override {
    int z = pseudo_byte_route(pkt.size, params_);
    double p_inst = std::min(1.0, params_.probability * std::ldexp(1.0, z));
    return rng_.next_bernoulli(p_inst);
  }

  double nominal_probability() const override { return params_.probability; }
  size_t memory_overhead_bytes() const override {
    size_t t = params_.instance_sizes.size() + 1;  // + the sub-threshold instance
    return t * (kGroupBytes + 2 * kBucketBytes) + 8 * t * kTableEntryBytes;
  }

 private:
  PseudoByteParams params_;
  Rng rng_;
};

class HashCompareSampler final : public Sampler {
 public:
  HashCompareSampler(double p, VirtualTime rotate_interval, uint64_t seed)
      : bits_(probability_to_bits(p)),
        rules_(build_comparison_ruleset(bits_ == 0 ? 1 : bits_)),
        rotate_interval_(rotate_interval),
        next_rotation_(rotate_interval),
        rng_(seed) {
    if (bits_ == 0) rules_.width = 0;
    r_ = rotate_r(bits_, rng_, nullptr);
  }

  bool sample(const Packet& pkt) override {
    if (bits_ == 0) return true;
    return hash_compare_sample(pkt, bits_, r_, rules_);
  }

  void on_timer(VirtualTime now, ControlAccounting& acct) override {
    if (rotate_interval_.micros() <= 0) return;
    while (now >= next_rotation_) {
      r_ = rotate_r(bits_, rng_, &acct);
      next_rotation_ += rotate_interval_;
    }
  }

  double nominal_probability() const override { return std::ldexp(1.0, -bits_); }
  size_t memory_overhead_bytes() const override {
    return 4 * static_cast<size_t>(bits_) * kTableEntryBytes + kTableEntryBytes;
  }

 private:
  int bits_;
  ComparisonRuleset rules_;
  VirtualTime rotate_interval_;
  VirtualTime next_rotation_;
  Rng rng_;
  uint16_t r_ = 0;
};

}  // namespace

std::unique_ptr<Sampler> make_sampler(const SamplerParams& params) {
  switch (params.kind) {
    case SamplerParams::Kind::Weighted:
      return std::make_unique<WeightedSampler>(params.probability, params.seed);
    case SamplerParams::Kind::RoundRobin: {
      std::vector<uint64_t> sizes = params.group_sizes;
      if (sizes.empty())
        sizes.push_back(static_cast<uint64_t>(std::ceil(1.0 / params.probability - 1e-9)));
      return std::make_unique<RoundRobinSampler>(std::move(sizes));
    }
    case SamplerParams::Kind::HashMatch:
      return std::make_unique<HashMatchSampler>(params.probability, params.rotate_interval,
                                                params.seed);
    case SamplerParams::Kind::PseudoByteRouter:
      return std::make_unique<PseudoByteRouterSampler>(params.probability,
                                                       params.route_policy, params.seed);
    case SamplerParams::Kind::HashCompare:
      return std::make_unique<HashCompareSampler>(params.probability, params.rotate_interval,
                                                  params.seed);
  }
  throw std::invalid_argument("unknown sampler kind");
}

}  // namespace hfsim
