#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hfsim/flow.hpp"
#include "hfsim/switch.hpp"

namespace hfsim {

struct NoRoute : std::runtime_error {
  explicit NoRoute(const std::string& what) : std::runtime_error(what) {}
};

// Static multi-switch monitoring plane. A flow may have several paths
// (split flows); packets alternate across them deterministically. Marks are
// stripped at egress so traffic leaves the topology clean.
class Topology {
 public:
  void add_switch(std::unique_ptr<Switch> sw) { switches_.push_back(std::move(sw)); }
  void set_route(const FlowKey& key, std::vector<std::vector<int>> paths);

  // Flows without an explicit route take this path; without it, routing an
  // unknown flow throws NoRoute.
  void set_default_path(std::vector<int> path) { default_path_ = std::move(path); }

  // When false, switches ignore marks entirely (the over-sampling control
  // experiment from the multi-switch analysis).
  void set_honor_marks(bool honor) { honor_marks_ = honor; }

  size_t switch_count() const { return switches_.size(); }
  Switch& switch_at(size_t idx) { return *switches_.at(idx); }
  const Switch& switch_at(size_t idx) const { return *switches_.at(idx); }

  struct HopOutcome {
    int switch_id = 0;
    PipelineAction action = PipelineAction::Passed;
  };
  struct RouteResult {
    std::vector<HopOutcome> hops;
    bool sampled = false;  // any hop produced a packet-in
    Packet egress;         // the packet as it left the topology
  };

  RouteResult route_packet(const Packet& pkt);

  // Installs a count rule for `key` on every monitoring switch.
  void fanout_install(const FlowKey& key, VirtualTime now = VirtualTime());

  // Per-flow counters summed across switches, sorted by key.
  std::vector<CounterSnapshot> aggregate_polls();

  std::vector<FlowKey> expire_idle_rules(VirtualTime now, VirtualTime idle_timeout);
  void fire_sampler_timers(VirtualTime now);

  size_t max_memory_usage() const;

 private:
  std::vector<std::unique_ptr<Switch>> switches_;
  struct Route {
    std::vector<std::vector<int>> paths;
    uint64_t next_path = 0;
  };
  std::map<FlowKey, Route> routes_;
  std::vector<int> default_path_;
  bool honor_marks_ = true;
};

}  // namespace hfsim
