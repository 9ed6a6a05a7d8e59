#include "hfsim/distributed.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace hfsim {

void Topology::set_route(const FlowKey& key, std::vector<std::vector<int>> paths) {
  assert(!paths.empty());
  for (const auto& path : paths) {
    assert(!path.empty());
    (void)path;
  }
  routes_[key] = Route{std::move(paths), 0};
}

Topology::RouteResult Topology::route_packet(const Packet& pkt) {
  auto it = routes_.find(pkt.key);
  if (it == routes_.end() && default_path_.empty())
    throw NoRoute("no route for flow " + to_string(pkt.key));
  const std::vector<int>* path_ptr = &default_path_;
  if (it != routes_.end()) {
    Route& route = it->second;
    path_ptr = &route.paths[route.next_path % route.paths.size()];
    ++route.next_path;
  }
  const std::vector<int>& path = *path_ptr;

  RouteResult result;
  Packet traveling = pkt;
  for (int sw_id : path) {
    Switch& sw = *switches_.at(static_cast<size_t>(sw_id));
    if (!honor_marks_) traveling.mark = false;
    PipelineAction action = sw.process_packet(traveling);
    result.hops.push_back({sw_id, action});
    if (action == PipelineAction::Sampled) result.sampled = true;
  }
  traveling.mark = false;  // stripped at the egress port
  result.egress = traveling;
  return result;
}

void Topology::fanout_install(const FlowKey& key, VirtualTime now) {
  for (auto& sw : switches_) sw->install_count_rule(key, now);
}

std::vector<CounterSnapshot> Topology::aggregate_polls() {
  std::map<FlowKey, CounterSnapshot> merged;
  for (auto& sw : switches_) {
    for (const auto& row : sw->poll_counters()) {
      auto& agg = merged[row.key];
      agg.key = row.key;
      agg.packets += row.packets;
      agg.bytes += row.bytes;
    }
  }
  std::vector<CounterSnapshot> out;
  out.reserve(merged.size());
  for (auto& [key, row] : merged) out.push_back(row);
  return out;
}

std::vector<FlowKey> Topology::expire_idle_rules(VirtualTime now, VirtualTime idle_timeout) {
  std::vector<FlowKey> removed;
  for (auto& sw : switches_) {
    for (const auto& key : sw->expire_idle_rules(now, idle_timeout)) {
      // A rule may expire on one switch while staying live on another; the
      // controller retires the flow once it is gone everywhere.
      bool anywhere = false;
      for (const auto& other : switches_) anywhere = anywhere || other->has_rule(key);
      if (!anywhere) removed.push_back(key);
    }
  }
  std::sort(removed.begin(), removed.end());
  removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
  return removed;
}

void Topology::fire_sampler_timers(VirtualTime now) {
  for (auto& sw : switches_) sw->fire_sampler_timers(now);
}

size_t Topology::max_memory_usage() const {
  size_t max_bytes = 0;
  for (const auto& sw : switches_) max_bytes = std::max(max_bytes, sw->memory_usage());
  return max_bytes;
}

}  // namespace hfsim
