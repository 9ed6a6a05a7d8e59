#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hfsim/flow.hpp"
#include "hfsim/rng.hpp"
#include "hfsim/time.hpp"

namespace hfsim {

struct MalformedRecord : std::runtime_error {
  explicit MalformedRecord(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic 16-bit checksum stand-in for records that do not carry one.
// Uniform over [0, 2^16) and avalanching in every input bit.
uint16_t synthesize_checksum(VirtualTime time, const FlowKey& key, uint32_t size,
                             uint64_t seed);

// Parses one CSV record `time,src_ip,dst_ip,src_port,dst_port,proto,size[,checksum]`.
// When the checksum column is absent it is synthesized from (record, seed).
// `prev_time`, when given, enforces non-decreasing timestamps.
Packet parse_trace_record(std::string_view line, uint64_t checksum_seed,
                          std::optional<VirtualTime> prev_time = std::nullopt);

// Canonical CSV form, including the checksum column. parse(format(p)) == p.
std::string format_trace_record(const Packet& pkt);

// Streaming reader over a trace file. Skips `#` comments and an optional
// header line; enforces time monotonicity across records.
class TraceReader {
 public:
  TraceReader(std::istream& in, uint64_t checksum_seed);
  std::optional<Packet> next();

 private:
  std::istream& in_;
  uint64_t seed_;
  std::optional<VirtualTime> prev_;
  bool first_line_ = true;
};

// Discrete packet-size distribution over [64, 1500].
struct SizeDistribution {
  std::vector<std::pair<uint32_t, double>> points;  // (size, weight)

  // 7:4:1 small/medium/large mix.
  static SizeDistribution default_mix() {
    return SizeDistribution{{{64, 7.0}, {576, 4.0}, {1500, 1.0}}};
  }
  static SizeDistribution fixed(uint32_t size) { return SizeDistribution{{{size, 1.0}}}; }
};

struct ZipfConfig {
  uint32_t flow_count = 1;
  double alpha = 1.0;  // Zipf exponent, > 0
  uint64_t packet_count = 1;
  double rate = 1.0;  // packets per virtual second
  SizeDistribution size_dist = SizeDistribution::default_mix();
  uint64_t seed = 0;
  bool zero_checksums = false;  // adversarial mode: evade hash-based samplers

  void validate() const;
};

// Streaming Zipf trace source. Pure function of the config: same config,
// same packets.
class ZipfTraceGenerator {
 public:
  explicit ZipfTraceGenerator(const ZipfConfig& cfg);

  std::optional<Packet> next();
  uint64_t emitted() const { return emitted_; }

  // Deterministic rank -> key mapping (rank is 1-based).
  static FlowKey key_for_rank(uint32_t rank);

  // Normalized Zipf mass of each rank, sum = 1. Used by analytic oracles.
  static std::vector<double> rank_masses(uint32_t flow_count, double alpha);

 private:
  ZipfConfig cfg_;
  Rng rng_;
  std::vector<double> flow_cdf_;
  std::vector<double> size_cdf_;
  uint64_t emitted_ = 0;
};

std::vector<Packet> generate_zipf_trace(const ZipfConfig& cfg);

}  // namespace hfsim
