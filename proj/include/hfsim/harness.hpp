#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hfsim/controller.hpp"
#include "hfsim/distributed.hpp"
#include "hfsim/sampling.hpp"
#include "hfsim/trace.hpp"

namespace hfsim {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message) {}
};

enum class Algorithm { Pick, Hold, HHOnly };

std::string algorithm_name(Algorithm algo);
std::string sampler_name(SamplerParams::Kind kind);

struct TraceSpec {
  enum class Kind { File, Zipf };
  Kind kind = Kind::Zipf;
  std::string path;  // file traces
  ZipfConfig zipf;
};

struct ExperimentConfig {
  TraceSpec trace;
  Algorithm algorithm = Algorithm::Pick;
  SamplerParams sampler;
  PickConfig pick;
  double interval_seconds = 5.0;
  size_t interval_count = 10;
  size_t switch_count = 1;
  std::vector<int> default_path;  // defaults to {0, 1, ..., switch_count-1}
  VirtualTime idle_timeout = VirtualTime::from_seconds(5.0);
  uint64_t seed = 0;

  void validate() const;
};

// Parses the declarative experiment config; errors name the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

// Exact per-boundary ground truth: cumulative counts since measurement
// start, heavy = flows with count >= T * total.
struct IntervalTruth {
  uint64_t total = 0;  // cumulative packets (or bytes)
  std::vector<std::pair<FlowKey, uint64_t>> heavy;  // sorted by key
};

std::vector<IntervalTruth> ground_truth(const std::vector<Packet>& trace,
                                        double heavy_threshold, VirtualTime interval_len,
                                        size_t interval_count,
                                        CountMode mode = CountMode::Packets);

struct IntervalMetrics {
  size_t index = 0;
  double end_seconds = 0;
  uint64_t truth_count = 0;
  uint64_t reported_count = 0;
  uint64_t missed = 0;
  uint64_t spurious = 0;
  double fn_rate = 0;
  double fp_rate = 0;
  double counter_error = 0;
  uint64_t switch_memory_bytes = 0;  // max over the interval
  double ctrl_to_switch_bps = 0;     // bytes per second
  double switch_to_ctrl_bps = 0;
  double packet_in_per_s = 0;
};

struct MetricsReport {
  std::string algorithm;
  std::string sampler;
  double heavy_threshold = 0;
  double suspect_threshold = 0;
  double sample_probability = 0;
  size_t hh_capacity = 0;
  uint64_t seed = 0;
  double interval_seconds = 0;
  size_t interval_count = 0;
  std::vector<IntervalMetrics> intervals;
  IntervalMetrics summary;  // means over intervals

  // End-of-run state used by resource checks.
  uint64_t final_count_rules = 0;
  uint64_t final_memory_bytes = 0;
  uint64_t max_count_rules = 0;
  uint64_t flowmod_count = 0;
  uint64_t flowmod_bytes = 0;
  uint64_t installed_evictions = 0;
};

MetricsReport run_experiment(const ExperimentConfig& cfg);

struct TrafficRates {
  double controller_to_switch_bps = 0;
  double switch_to_controller_bps = 0;
};

// FlowMods (108/110 B) flow controller->switch; packet-ins (68 B) and poll
// replies (8 + 40*rules B) flow switch->controller.
TrafficRates account_control_traffic(const SwitchStats& delta, double seconds);

enum class ReportFormat { Csv, Json };

std::string render_report(const MetricsReport& report, ReportFormat format);
void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path);

}  // namespace hfsim
