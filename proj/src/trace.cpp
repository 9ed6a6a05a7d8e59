#include "hfsim/trace.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace hfsim {

namespace {

uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::string_view line, const std::string& why) {
  throw MalformedRecord(why + " in record: " + std::string(line));
}

uint64_t parse_uint(std::string_view field, uint64_t max, std::string_view line,
                    const char* what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value > max)
    fail(line, std::string("bad ") + what);
  return value;
}

uint32_t parse_ip(std::string_view field, std::string_view line, const char* what) {
  uint32_t ip = 0;
  size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    size_t dot = field.find('.', pos);
    std::string_view part = (octet == 3) ? field.substr(pos) : field.substr(pos, dot - pos);
    if (octet < 3 && dot == std::string_view::npos) fail(line, std::string("bad ") + what);
    ip = (ip << 8) | static_cast<uint32_t>(parse_uint(part, 255, line, what));
    pos = dot + 1;
  }
  return ip;
}

// Time is parsed as seconds with up to 6 fractional digits (microseconds).
VirtualTime parse_time(std::string_view field, std::string_view line) {
  size_t dot = field.find('.');
  std::string_view whole = (dot == std::string_view::npos) ? field : field.substr(0, dot);
  uint64_t secs = parse_uint(whole, UINT64_MAX / 2'000'000, line, "time");
  uint64_t micros = 0;
  if (dot != std::string_view::npos) {
    std::string_view frac = field.substr(dot + 1);
    if (frac.empty() || frac.size() > 6) fail(line, "bad time");
    uint64_t digits = parse_uint(frac, 999999, line, "time");
    uint64_t scale = 1;
    for (size_t i = frac.size(); i < 6; ++i) scale *= 10;
    micros = digits * scale;
  }
  return VirtualTime::from_micros(static_cast<int64_t>(secs * 1'000'000 + micros));
}

void format_ip(uint32_t ip, std::string& out) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xff, (ip >> 16) & 0xff,
                (ip >> 8) & 0xff, ip & 0xff);
  out += buf;
}

}  // namespace

std::string to_string(const FlowKey& key) {
  std::string out;
  format_ip(key.src_ip, out);
  out += ':';
  out += std::to_string(key.src_port);
  out += "->";
  format_ip(key.dst_ip, out);
  out += ':';
  out += std::to_string(key.dst_port);
  out += '/';
  out += std::to_string(key.proto);
  return out;
}

uint16_t synthesize_checksum(VirtualTime time, const FlowKey& key, uint32_t size,
                             uint64_t seed) {
  uint64_t h = seed;
  h = mix64(h ^ static_cast<uint64_t>(time.micros()));
  h = mix64(h ^ ((static_cast<uint64_t>(key.src_ip) << 32) | key.dst_ip));
  h = mix64(h ^ ((static_cast<uint64_t>(key.src_port) << 32) |
                 (static_cast<uint64_t>(key.dst_port) << 16) | key.proto));
  h = mix64(h ^ size);
  return static_cast<uint16_t>(h);
}

Packet parse_trace_record(std::string_view line, uint64_t checksum_seed,
                          std::optional<VirtualTime> prev_time) {
  auto fields = split_fields(line);
  if (fields.size() != 7 && fields.size() != 8)
    fail(line, "expected 7 or 8 fields, got " + std::to_string(fields.size()));

  Packet pkt;
  pkt.time = parse_time(fields[0], line);
  pkt.key.src_ip = parse_ip(fields[1], line, "src_ip");
  pkt.key.dst_ip = parse_ip(fields[2], line, "dst_ip");
  pkt.key.src_port = static_cast<uint16_t>(parse_uint(fields[3], 65535, line, "src_port"));
  pkt.key.dst_port = static_cast<uint16_t>(parse_uint(fields[4], 65535, line, "dst_port"));
  pkt.key.proto = static_cast<uint8_t>(parse_uint(fields[5], 255, line, "proto"));
  pkt.size = static_cast<uint32_t>(parse_uint(fields[6], UINT32_MAX, line, "size"));
  if (pkt.size < kMinPacketSize || pkt.size > kMaxPacketSize)
    fail(line, "size out of [64,1500]");
  if (fields.size() == 8)
    pkt.checksum = static_cast<uint16_t>(parse_uint(fields[7], 65535, line, "checksum"));
  else
    pkt.checksum = synthesize_checksum(pkt.time, pkt.key, pkt.size, checksum_seed);
  if (prev_time && pkt.time < *prev_time) fail(line, "time decreasing");
  pkt.mark = false;
  return pkt;
}

std::string format_trace_record(const Packet& pkt) {
  int64_t us = pkt.time.micros();
  char frac[8];
  std::snprintf(frac, sizeof(frac), "%06lld", static_cast<long long>(us % 1'000'000));
  std::string_view f(frac, 6);
  while (f.size() > 1 && f.back() == '0') f.remove_suffix(1);

  std::string out = std::to_string(us / 1'000'000);
  out += '.';
  out += f;
  out += ',';
  format_ip(pkt.key.src_ip, out);
  out += ',';
  format_ip(pkt.key.dst_ip, out);
  out += ',';
  out += std::to_string(pkt.key.src_port);
  out += ',';
  out += std::to_string(pkt.key.dst_port);
  out += ',';
  out += std::to_string(pkt.key.proto);
  out += ',';
  out += std::to_string(pkt.size);
  out += ',';
  out += std::to_string(pkt.checksum);
  return out;
}

TraceReader::TraceReader(std::istream& in, uint64_t checksum_seed)
    : in_(in), seed_(checksum_seed) {}

std::optional<Packet> TraceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (first_line_) {
      first_line_ = false;
      // Optional header line: first field starts with a letter.
      if (!line.empty() && std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    }
    Packet pkt = parse_trace_record(line, seed_, prev_);
    prev_ = pkt.time;
    return pkt;
  }
  return std::nullopt;
}

void ZipfConfig::validate() const {
  if (flow_count < 1) throw std::invalid_argument("zipf: flow_count must be >= 1");
  if (packet_count < 1) throw std::invalid_argument("zipf: packet_count must be >= 1");
  if (!(alpha > 0)) throw std::invalid_argument("zipf: alpha must be > 0");
  if (!(rate > 0)) throw std::invalid_argument("zipf: rate must be > 0");
  if (size_dist.points.empty()) throw std::invalid_argument("zipf: empty size distribution");
  for (auto [size, w] : size_dist.points) {
    if (size < kMinPacketSize || size > kMaxPacketSize)
      throw std::invalid_argument("zipf: size point out of [64,1500]");
    if (!(w > 0)) throw std::invalid_argument("zipf: size weight must be > 0");
  }
}

ZipfTraceGenerator::ZipfTraceGenerator(const ZipfConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  flow_cdf_.reserve(cfg_.flow_count);
  double acc = 0;
  for (uint32_t k = 1; k <= cfg_.flow_count; ++k) {
    acc += std::pow(static_cast<double>(k), -cfg_.alpha);
    flow_cdf_.push_back(acc);
  }
  for (auto& c : flow_cdf_) c /= acc;

  size_cdf_.reserve(cfg_.size_dist.points.size());
  double sacc = 0;
  for (auto [size, w] : cfg_.size_dist.points) {
    sacc += w;
    size_cdf_.push_back(sacc);
  }
  for (auto& c : size_cdf_) c /= sacc;
}

FlowKey ZipfTraceGenerator::key_for_rank(uint32_t rank) {
  FlowKey key;
  key.src_ip = 0x0a000000u + rank;  // 10.0.0.0/8, one host per rank
  key.dst_ip = 0xc0a80001u;         // 192.168.0.1
  key.src_port = 40000;
  key.dst_port = 443;
  key.proto = 6;
  return key;
}

std::vector<double> ZipfTraceGenerator::rank_masses(uint32_t flow_count, double alpha) {
  std::vector<double> masses(flow_count);
  double total = 0;
  for (uint32_t k = 1; k <= flow_count; ++k) {
    masses[k - 1] = std::pow(static_cast<double>(k), -alpha);
    total += masses[k - 1];
  }
  for (auto& m : masses) m /= total;
  return masses;
}

std::optional<Packet> ZipfTraceGenerator::next() {
  if (emitted_ >= cfg_.packet_count) return std::nullopt;

  Packet pkt;
  pkt.time = VirtualTime::from_micros(
      static_cast<int64_t>(std::llround(static_cast<double>(emitted_) * 1e6 / cfg_.rate)));

  double u = rng_.next_double();
  auto it = std::upper_bound(flow_cdf_.begin(), flow_cdf_.end(), u);
  uint32_t rank = static_cast<uint32_t>(it - flow_cdf_.begin()) + 1;
  if (rank > cfg_.flow_count) rank = cfg_.flow_count;
  pkt.key = key_for_rank(rank);

  double su = rng_.next_double();
  auto sit = std::upper_bound(size_cdf_.begin(), size_cdf_.end(), su);
  size_t sidx = std::min<size_t>(static_cast<size_t>(sit - size_cdf_.begin()),
                                 cfg_.size_dist.points.size() - 1);
  pkt.size = cfg_.size_dist.points[sidx].first;

  pkt.checksum = cfg_.zero_checksums ? 0 : rng_.next_u16();
  pkt.mark = false;
  ++emitted_;
  return pkt;
}

std::vector<Packet> generate_zipf_trace(const ZipfConfig& cfg) {
  ZipfTraceGenerator gen(cfg);
  std::vector<Packet> out;
  out.reserve(cfg.packet_count);
  while (auto pkt = gen.next()) out.push_back(*pkt);
  return out;
}

}  // namespace hfsim
