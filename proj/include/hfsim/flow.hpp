#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "hfsim/time.hpp"

namespace hfsim {

// 5-tuple flow identifier. Totally ordered so that iteration over flow sets
// is deterministic.
struct FlowKey {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint8_t proto = 0;

  auto operator<=>(const FlowKey&) const = default;
};

std::string to_string(const FlowKey& key);

struct FlowKeyHash {
  size_t operator()(const FlowKey& k) const {
    uint64_t a = (static_cast<uint64_t>(k.src_ip) << 32) | k.dst_ip;
    uint64_t b = (static_cast<uint64_t>(k.src_port) << 24) |
                 (static_cast<uint64_t>(k.dst_port) << 8) | k.proto;
    uint64_t z = a * 0x9e3779b97f4a7c15ULL + b;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<size_t>(z ^ (z >> 27));
  }
};

constexpr uint32_t kMinPacketSize = 64;
constexpr uint32_t kMaxPacketSize = 1500;

struct Packet {
  VirtualTime time;
  FlowKey key;
  uint32_t size = kMinPacketSize;  // bytes, within [64, 1500]
  uint16_t checksum = 0;
  bool mark = false;  // set by the sampling/counting stages, stripped at egress
};

}  // namespace hfsim

template <>
struct std::hash<hfsim::FlowKey> {
  size_t operator()(const hfsim::FlowKey& k) const { return hfsim::FlowKeyHash{}(k); }
};
