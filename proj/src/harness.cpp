#include "hfsim/harness.hpp"

#include <algorithm>

#include "hfsim/baselines.hpp"
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace hfsim {

using nlohmann::json;

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::Pick: return "pick";
    case Algorithm::Hold: return "hold";
    case Algorithm::HHOnly: return "hh";
  }
  return "?";
}

std::string sampler_name(SamplerParams::Kind kind) {
  switch (kind) {
    case SamplerParams::Kind::Weighted: return "weighted";
    case SamplerParams::Kind::RoundRobin: return "round_robin";
    case SamplerParams::Kind::HashMatch: return "hash_match";
    case SamplerParams::Kind::PseudoByteRouter: return "pseudo_byte";
    case SamplerParams::Kind::HashCompare: return "hash_compare";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (interval_seconds <= 0) throw ConfigError("intervals.length", "must be > 0");
  if (interval_count < 1) throw ConfigError("intervals.count", "must be >= 1");
  if (switch_count < 1) throw ConfigError("topology.switches", "must be >= 1");
  if (!(sampler.probability > 0) || sampler.probability > 1)
    throw ConfigError("sampler.p", "must be in (0,1]");
  for (int id : default_path)
    if (id < 0 || static_cast<size_t>(id) >= switch_count)
      throw ConfigError("topology.default_path", "switch id out of range");
  if (algorithm == Algorithm::Pick) {
    try {
      pick.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("pick", e.what());
    }
  } else {
    // hold/hh still report against T; hh also needs a structure capacity.
    if (!(pick.heavy_threshold > 0) || pick.heavy_threshold > 1)
      throw ConfigError("pick.T", "must be in (0,1]");
  }
  if (trace.kind == TraceSpec::Kind::Zipf) trace.zipf.validate();
}

namespace {

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

uint64_t require_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<uint64_t>();
}

std::string require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

SamplerParams::Kind sampler_kind_from(const std::string& name, const std::string& path) {
  if (name == "weighted") return SamplerParams::Kind::Weighted;
  if (name == "round_robin") return SamplerParams::Kind::RoundRobin;
  if (name == "hash_match") return SamplerParams::Kind::HashMatch;
  if (name == "pseudo_byte") return SamplerParams::Kind::PseudoByteRouter;
  if (name == "hash_compare") return SamplerParams::Kind::HashCompare;
  throw ConfigError(path, "unknown sampler '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<config>", e.what());
  }

  ExperimentConfig cfg;

  if (!root.contains("trace")) throw ConfigError("trace", "missing");
  const json& trace = root["trace"];
  std::string kind = require_string(trace.value("type", json("zipf")), "trace.type");
  if (kind == "file") {
    cfg.trace.kind = TraceSpec::Kind::File;
    if (!trace.contains("path")) throw ConfigError("trace.path", "missing");
    cfg.trace.path = require_string(trace["path"], "trace.path");
  } else if (kind == "zipf") {
    cfg.trace.kind = TraceSpec::Kind::Zipf;
    ZipfConfig& z = cfg.trace.zipf;
    z.flow_count = static_cast<uint32_t>(require_uint(trace.value("flows", json(1)), "trace.flows"));
    z.alpha = require_number(trace.value("alpha", json(1.0)), "trace.alpha");
    z.packet_count = require_uint(trace.value("packets", json(1)), "trace.packets");
    z.rate = require_number(trace.value("rate", json(1.0)), "trace.rate");
    if (trace.contains("fixed_size"))
      z.size_dist = SizeDistribution::fixed(
          static_cast<uint32_t>(require_uint(trace["fixed_size"], "trace.fixed_size")));
    if (trace.contains("zero_checksums")) {
      if (!trace["zero_checksums"].is_boolean())
        throw ConfigError("trace.zero_checksums", "expected a boolean");
      z.zero_checksums = trace["zero_checksums"].get<bool>();
    }
  } else {
    throw ConfigError("trace.type", "must be 'file' or 'zipf'");
  }

  std::string algo = require_string(root.value("algorithm", json("pick")), "algorithm");
  if (algo == "pick")
    cfg.algorithm = Algorithm::Pick;
  else if (algo == "hold")
    cfg.algorithm = Algorithm::Hold;
  else if (algo == "hh")
    cfg.algorithm = Algorithm::HHOnly;
  else
    throw ConfigError("algorithm", "must be one of pick|hold|hh");

  if (!root.contains("sampler")) throw ConfigError("sampler", "missing");
  const json& sampler = root["sampler"];
  cfg.sampler.kind =
      sampler_kind_from(require_string(sampler.value("type", json("weighted")), "sampler.type"),
                        "sampler.type");
  cfg.sampler.probability = require_number(sampler.value("p", json(1.0)), "sampler.p");
  if (sampler.contains("rotate_interval"))
    cfg.sampler.rotate_interval = VirtualTime::from_seconds(
        require_number(sampler["rotate_interval"], "sampler.rotate_interval"));
  if (sampler.contains("group_sizes")) {
    if (!sampler["group_sizes"].is_array())
      throw ConfigError("sampler.group_sizes", "expected an array");
    for (const auto& g : sampler["group_sizes"])
      cfg.sampler.group_sizes.push_back(require_uint(g, "sampler.group_sizes[]"));
  }
  if (sampler.contains("route_policy")) {
    std::string policy = require_string(sampler["route_policy"], "sampler.route_policy");
    if (policy == "log_ceil")
      cfg.sampler.route_policy = RoutePolicy::LogCeil;
    else if (policy == "argmin")
      cfg.sampler.route_policy = RoutePolicy::ArgMin;
    else
      throw ConfigError("sampler.route_policy", "must be log_ceil|argmin");
  }

  if (root.contains("pick")) {
    const json& pick = root["pick"];
    cfg.pick.heavy_threshold = require_number(pick.value("T", json(0.0)), "pick.T");
    cfg.pick.suspect_threshold = require_number(pick.value("t", json(0.0)), "pick.t");
    cfg.pick.sample_probability =
        require_number(pick.value("p", json(cfg.sampler.probability)), "pick.p");
    cfg.pick.hh_capacity = require_uint(pick.value("v", json(0)), "pick.v");
    if (pick.contains("poll_interval"))
      cfg.pick.poll_interval =
          VirtualTime::from_seconds(require_number(pick["poll_interval"], "pick.poll_interval"));
    if (pick.contains("count_mode")) {
      std::string mode = require_string(pick["count_mode"], "pick.count_mode");
      if (mode == "packets")
        cfg.pick.mode = CountMode::Packets;
      else if (mode == "bytes")
        cfg.pick.mode = CountMode::Bytes;
      else
        throw ConfigError("pick.count_mode", "must be packets|bytes");
    }
  } else {
    cfg.pick.sample_probability = cfg.sampler.probability;
  }

  if (root.contains("intervals")) {
    const json& iv = root["intervals"];
    cfg.interval_seconds = require_number(iv.value("length", json(5.0)), "intervals.length");
    cfg.interval_count = require_uint(iv.value("count", json(10)), "intervals.count");
  }

  if (root.contains("topology")) {
    const json& topo = root["topology"];
    cfg.switch_count = require_uint(topo.value("switches", json(1)), "topology.switches");
    if (topo.contains("default_path")) {
      if (!topo["default_path"].is_array())
        throw ConfigError("topology.default_path", "expected an array");
      for (const auto& id : topo["default_path"])
        cfg.default_path.push_back(
            static_cast<int>(require_uint(id, "topology.default_path[]")));
    }
  }
  if (cfg.default_path.empty())
    for (size_t i = 0; i < cfg.switch_count; ++i) cfg.default_path.push_back(static_cast<int>(i));

  if (root.contains("idle_timeout"))
    cfg.idle_timeout =
        VirtualTime::from_seconds(require_number(root["idle_timeout"], "idle_timeout"));
  if (root.contains("seed")) cfg.seed = require_uint(root["seed"], "seed");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::vector<IntervalTruth> ground_truth(const std::vector<Packet>& trace,
                                        double heavy_threshold, VirtualTime interval_len,
                                        size_t interval_count, CountMode mode) {
  std::vector<IntervalTruth> out;
  out.reserve(interval_count);
  std::unordered_map<FlowKey, uint64_t> counts;
  uint64_t total = 0;
  size_t pos = 0;

  for (size_t i = 0; i < interval_count; ++i) {
    VirtualTime boundary = VirtualTime::from_micros(interval_len.micros() *
                                                    static_cast<int64_t>(i + 1));
    for (; pos < trace.size() && trace[pos].time < boundary; ++pos) {
      uint64_t w = mode == CountMode::Packets ? 1 : trace[pos].size;
      counts[trace[pos].key] += w;
      total += w;
    }
    IntervalTruth truth;
    truth.total = total;
    double bar = heavy_threshold * static_cast<double>(total);
    for (const auto& [key, count] : counts)
      if (static_cast<double>(count) >= bar) truth.heavy.emplace_back(key, count);
    std::sort(truth.heavy.begin(), truth.heavy.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(truth));
  }
  return out;
}

TrafficRates account_control_traffic(const SwitchStats& delta, double seconds) {
  assert(seconds > 0);
  TrafficRates rates;
  rates.controller_to_switch_bps =
      static_cast<double>(delta.flowmod_bytes + delta.meta_update_bytes) / seconds;
  rates.switch_to_controller_bps =
      static_cast<double>(delta.packet_in_bytes + delta.poll_reply_bytes) / seconds;
  return rates;
}

namespace {

SwitchStats sum_stats(const Topology& topo) {
  SwitchStats sum;
  for (size_t i = 0; i < topo.switch_count(); ++i) {
    const SwitchStats& s = topo.switch_at(i).stats();
    sum.packets_processed += s.packets_processed;
    sum.packet_in_count += s.packet_in_count;
    sum.packet_in_bytes += s.packet_in_bytes;
    sum.flowmod_count += s.flowmod_count;
    sum.flowmod_bytes += s.flowmod_bytes;
    sum.meta_update_count += s.meta_update_count;
    sum.meta_update_bytes += s.meta_update_bytes;
    sum.poll_reply_count += s.poll_reply_count;
    sum.poll_reply_bytes += s.poll_reply_bytes;
  }
  return sum;
}

SwitchStats stats_delta(const SwitchStats& now, const SwitchStats& before) {
  SwitchStats d;
  d.packets_processed = now.packets_processed - before.packets_processed;
  d.packet_in_count = now.packet_in_count - before.packet_in_count;
  d.packet_in_bytes = now.packet_in_bytes - before.packet_in_bytes;
  d.flowmod_count = now.flowmod_count - before.flowmod_count;
  d.flowmod_bytes = now.flowmod_bytes - before.flowmod_bytes;
  d.meta_update_count = now.meta_update_count - before.meta_update_count;
  d.meta_update_bytes = now.meta_update_bytes - before.meta_update_bytes;
  d.poll_reply_count = now.poll_reply_count - before.poll_reply_count;
  d.poll_reply_bytes = now.poll_reply_bytes - before.poll_reply_bytes;
  return d;
}

std::vector<Packet> materialize_trace(const ExperimentConfig& cfg) {
  if (cfg.trace.kind == TraceSpec::Kind::Zipf) {
    ZipfConfig z = cfg.trace.zipf;
    if (cfg.seed != 0) z.seed = cfg.seed;
    return generate_zipf_trace(z);
  }
  std::ifstream in(cfg.trace.path);
  if (!in) throw ConfigError("trace.path", "cannot open " + cfg.trace.path);
  TraceReader reader(in, cfg.seed);
  std::vector<Packet> out;
  while (auto pkt = reader.next()) out.push_back(*pkt);
  return out;
}

struct IntervalAccumulator {
  SwitchStats stats_at_start;
  uint64_t max_memory = 0;
  uint64_t max_rules = 0;

  void observe(const Topology& topo) {
    max_memory = std::max<uint64_t>(max_memory, topo.max_memory_usage());
    uint64_t rules = 0;
    for (size_t i = 0; i < topo.switch_count(); ++i)
      rules = std::max<uint64_t>(rules, topo.switch_at(i).count_rule_count());
    max_rules = std::max(max_rules, rules);
  }
};

IntervalMetrics score_interval(const IntervalTruth& truth,
                               const std::vector<HeavyReportEntry>& report) {
  IntervalMetrics m;
  m.truth_count = truth.heavy.size();
  m.reported_count = report.size();

  std::set<FlowKey> reported_keys;
  std::unordered_map<FlowKey, double> estimates;
  for (const auto& row : report) {
    reported_keys.insert(row.key);
    estimates[row.key] = row.estimated_volume;
  }

  double error_sum = 0;
  for (const auto& [key, true_count] : truth.heavy) {
    auto it = estimates.find(key);
    if (it == estimates.end()) {
      ++m.missed;
      error_sum += 1.0;  // absent from the report counts as 100% error
    } else {
      error_sum += std::abs(it->second - static_cast<double>(true_count)) /
                   static_cast<double>(true_count);
    }
  }
  std::set<FlowKey> truth_keys;
  for (const auto& [key, count] : truth.heavy) truth_keys.insert(key);
  for (const auto& key : reported_keys)
    if (!truth_keys.count(key)) ++m.spurious;

  if (m.truth_count > 0) {
    m.fn_rate = std::min(1.0, static_cast<double>(m.missed) / m.truth_count);
    m.fp_rate = std::min(1.0, static_cast<double>(m.spurious) / m.truth_count);
    m.counter_error = error_sum / static_cast<double>(m.truth_count);
  } else {
    m.fn_rate = 0;
    m.fp_rate = m.spurious > 0 ? 1.0 : 0.0;
    m.counter_error = 0;
  }
  return m;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.algorithm == Algorithm::Pick && !cfg.pick.capacity_sufficient())
    std::fprintf(stderr, "warning: pick.v=%zu is below 2/t=%.0f; installed flows may evict\n",
                 cfg.pick.hh_capacity, 2.0 / cfg.pick.suspect_threshold);

  const std::vector<Packet> trace = materialize_trace(cfg);
  const VirtualTime interval_len = VirtualTime::from_seconds(cfg.interval_seconds);
  const CountMode mode = cfg.algorithm == Algorithm::Pick ? cfg.pick.mode : CountMode::Packets;
  const double heavy_threshold = cfg.pick.heavy_threshold;
  const std::vector<IntervalTruth> truth =
      ground_truth(trace, heavy_threshold, interval_len, cfg.interval_count, mode);

  // One sampler per switch, independently seeded.
  Topology topo;
  size_t rule_cap = Switch::kUnlimitedRules;
  if (cfg.algorithm == Algorithm::Pick) rule_cap = cfg.pick.install_cap();
  if (cfg.algorithm == Algorithm::HHOnly) rule_cap = 0;
  for (size_t i = 0; i < cfg.switch_count; ++i) {
    SamplerParams sp = cfg.sampler;
    uint64_t mixer = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
    sp.seed = splitmix64(mixer) + i * 0x100000001b3ULL;
    topo.add_switch(std::make_unique<Switch>(static_cast<int>(i), rule_cap, make_sampler(sp)));
  }

  PickController pick_ctl(cfg.algorithm == Algorithm::Pick
                              ? cfg.pick
                              : PickConfig{0.5, 0.25, cfg.sampler.probability, 2,
                                           VirtualTime::from_seconds(0.1), CountMode::Packets});
  HoldController hold_ctl(cfg.sampler.probability);
  HHOnlyController hh_ctl(cfg.pick.hh_capacity ? cfg.pick.hh_capacity : 2048,
                          cfg.sampler.probability);

  MetricsReport report;
  report.algorithm = algorithm_name(cfg.algorithm);
  report.sampler = sampler_name(cfg.sampler.kind);
  report.heavy_threshold = cfg.pick.heavy_threshold;
  report.suspect_threshold = cfg.pick.suspect_threshold;
  report.sample_probability = cfg.sampler.probability;
  report.hh_capacity = cfg.pick.hh_capacity;
  report.seed = cfg.seed;
  report.interval_seconds = cfg.interval_seconds;
  report.interval_count = cfg.interval_count;

  VirtualClock clock;
  VirtualTime next_poll = cfg.pick.poll_interval;
  VirtualTime next_boundary = interval_len;
  size_t boundary_index = 0;
  uint64_t packets_ingressed = 0;
  IntervalAccumulator acc;
  uint64_t max_rules_run = 0;

  auto observe = [&]() {
    acc.observe(topo);
    max_rules_run = std::max(max_rules_run, acc.max_rules);
  };

  auto do_poll = [&](VirtualTime t) {
    clock.advance_to(t);
    topo.fire_sampler_timers(t);
    if (cfg.algorithm == Algorithm::Pick) {
      pick_ctl.on_poll(topo.aggregate_polls());
      for (const FlowKey& key : topo.expire_idle_rules(t, cfg.idle_timeout))
        pick_ctl.on_rule_expired(key);
      observe();
    }
  };

  auto do_boundary = [&](VirtualTime t) {
    clock.advance_to(t);
    const IntervalTruth& truth_row = truth[boundary_index];
    assert(truth_row.total == packets_ingressed ||
           mode == CountMode::Bytes);  // conservation with the oracle

    std::vector<HeavyReportEntry> heavy;
    switch (cfg.algorithm) {
      case Algorithm::Pick:
        heavy = pick_ctl.report_heavy();
        break;
      case Algorithm::Hold: {
        hold_ctl.on_poll(topo.aggregate_polls());
        heavy = hold_ctl.report_heavy(heavy_threshold, static_cast<double>(packets_ingressed));
        break;
      }
      case Algorithm::HHOnly:
        heavy = hh_ctl.report_heavy(heavy_threshold);
        break;
    }

    observe();
    IntervalMetrics m = score_interval(truth_row, heavy);
    m.index = boundary_index + 1;
    m.end_seconds = t.seconds();
    m.switch_memory_bytes = acc.max_memory;
    SwitchStats now = sum_stats(topo);
    SwitchStats delta = stats_delta(now, acc.stats_at_start);
    TrafficRates rates = account_control_traffic(delta, cfg.interval_seconds);
    m.ctrl_to_switch_bps = rates.controller_to_switch_bps;
    m.switch_to_ctrl_bps = rates.switch_to_controller_bps;
    m.packet_in_per_s = static_cast<double>(delta.packet_in_count) / cfg.interval_seconds;
    report.intervals.push_back(m);

    acc = IntervalAccumulator{};
    acc.stats_at_start = now;
    observe();
    ++boundary_index;
  };

  auto fire_due = [&](VirtualTime upto) {
    while (boundary_index < cfg.interval_count) {
      VirtualTime tnext = std::min(next_poll, next_boundary);
      if (tnext > upto) break;
      if (next_poll <= next_boundary) {
        do_poll(next_poll);
        next_poll += cfg.pick.poll_interval;
      } else {
        do_boundary(next_boundary);
        next_boundary += interval_len;
      }
    }
  };

  auto handle_sample = [&](const Packet& pkt, VirtualTime now,
                           const Topology::RouteResult& result) {
    switch (cfg.algorithm) {
      case Algorithm::Pick: {
        if (auto key = pick_ctl.on_sample(pkt)) {
          topo.fanout_install(*key, now);
          observe();
        }
        break;
      }
      case Algorithm::Hold: {
        if (auto key = hold_ctl.on_sample(pkt)) {
          // Cloned locally on the switch that sampled the packet.
          for (const auto& hop : result.hops) {
            if (hop.action == PipelineAction::Sampled) {
              topo.switch_at(static_cast<size_t>(hop.switch_id))
                  .install_count_rule(*key, now, InstallSource::SwitchLocal);
              break;
            }
          }
          observe();
        }
        break;
      }
      case Algorithm::HHOnly:
        hh_ctl.on_sample(pkt);
        break;
    }
  };

  std::vector<int> default_path = cfg.default_path;
  if (default_path.empty())
    for (size_t i = 0; i < cfg.switch_count; ++i) default_path.push_back(static_cast<int>(i));
  topo.set_default_path(default_path);
  for (const Packet& pkt : trace) {
    if (boundary_index >= cfg.interval_count) break;
    fire_due(pkt.time);
    if (boundary_index >= cfg.interval_count) break;
    clock.advance_to(pkt.time);
    Topology::RouteResult result = topo.route_packet(pkt);
    ++packets_ingressed;
    if (result.sampled) handle_sample(pkt, pkt.time, result);
  }

  // Drain the remaining timers and boundaries.
  fire_due(VirtualTime::from_micros(interval_len.micros() *
                                    static_cast<int64_t>(cfg.interval_count)));

  // Summary row: means over intervals.
  IntervalMetrics& s = report.summary;
  for (const IntervalMetrics& m : report.intervals) {
    s.truth_count += m.truth_count;
    s.reported_count += m.reported_count;
    s.missed += m.missed;
    s.spurious += m.spurious;
    s.fn_rate += m.fn_rate;
    s.fp_rate += m.fp_rate;
    s.counter_error += m.counter_error;
    s.switch_memory_bytes += m.switch_memory_bytes;
    s.ctrl_to_switch_bps += m.ctrl_to_switch_bps;
    s.switch_to_ctrl_bps += m.switch_to_ctrl_bps;
    s.packet_in_per_s += m.packet_in_per_s;
  }
  size_t n = report.intervals.empty() ? 1 : report.intervals.size();
  s.index = 0;
  s.end_seconds = cfg.interval_seconds * static_cast<double>(cfg.interval_count);
  s.fn_rate /= static_cast<double>(n);
  s.fp_rate /= static_cast<double>(n);
  s.counter_error /= static_cast<double>(n);
  s.switch_memory_bytes /= n;
  s.ctrl_to_switch_bps /= static_cast<double>(n);
  s.switch_to_ctrl_bps /= static_cast<double>(n);
  s.packet_in_per_s /= static_cast<double>(n);

  SwitchStats final_stats = sum_stats(topo);
  report.flowmod_count = final_stats.flowmod_count;
  report.flowmod_bytes = final_stats.flowmod_bytes;
  uint64_t rules = 0;
  for (size_t i = 0; i < topo.switch_count(); ++i)
    rules += topo.switch_at(i).count_rule_count();
  report.final_count_rules = rules;
  report.final_memory_bytes = topo.max_memory_usage();
  report.max_count_rules = max_rules_run;
  report.installed_evictions = pick_ctl.installed_evictions();
  return report;
}

namespace {

std::string fmt(double value, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

struct RenderedRow {
  std::string label;
  std::vector<std::string> cells;
};

const char* const kColumns[] = {"truth",         "reported",      "missed",
                                "spurious",      "fn_rate",       "fp_rate",
                                "counter_error", "switch_memory_bytes",
                                "ctrl_to_switch_Bps", "switch_to_ctrl_Bps",
                                "packet_in_per_s"};

RenderedRow render_row(const std::string& label, const IntervalMetrics& m) {
  RenderedRow row;
  row.label = label;
  row.cells = {std::to_string(m.truth_count),
               std::to_string(m.reported_count),
               std::to_string(m.missed),
               std::to_string(m.spurious),
               fmt(m.fn_rate, "%.6f"),
               fmt(m.fp_rate, "%.6f"),
               fmt(m.counter_error, "%.6f"),
               std::to_string(m.switch_memory_bytes),
               fmt(m.ctrl_to_switch_bps, "%.3f"),
               fmt(m.switch_to_ctrl_bps, "%.3f"),
               fmt(m.packet_in_per_s, "%.3f")};
  return row;
}

}  // namespace

std::string render_report(const MetricsReport& report, ReportFormat format) {
  std::vector<RenderedRow> rows;
  for (const IntervalMetrics& m : report.intervals)
    rows.push_back(render_row(std::to_string(m.index), m));
  rows.push_back(render_row("mean", report.summary));

  if (format == ReportFormat::Csv) {
    std::string out;
    out += "# algorithm=" + report.algorithm + " sampler=" + report.sampler +
           " T=" + fmt(report.heavy_threshold, "%.9g") +
           " t=" + fmt(report.suspect_threshold, "%.9g") +
           " p=" + fmt(report.sample_probability, "%.9g") +
           " v=" + std::to_string(report.hh_capacity) +
           " seed=" + std::to_string(report.seed) +
           " intervals=" + std::to_string(report.interval_count) + "x" +
           fmt(report.interval_seconds, "%.9g") + "s\n";
    out += "interval";
    for (const char* col : kColumns) out += std::string(",") + col;
    out += "\n";
    for (const RenderedRow& row : rows) {
      out += row.label;
      for (const std::string& cell : row.cells) out += "," + cell;
      out += "\n";
    }
    return out;
  }

  json root;
  root["header"] = {{"algorithm", report.algorithm},
                    {"sampler", report.sampler},
                    {"T", report.heavy_threshold},
                    {"t", report.suspect_threshold},
                    {"p", report.sample_probability},
                    {"v", report.hh_capacity},
                    {"seed", report.seed},
                    {"interval_count", report.interval_count},
                    {"interval_seconds", report.interval_seconds}};
  json intervals = json::array();
  for (const RenderedRow& row : rows) {
    json item;
    item["interval"] = row.label;
    for (size_t c = 0; c < row.cells.size(); ++c) {
      // Values come from the same rendered strings as the CSV.
      item[kColumns[c]] = std::stod(row.cells[c]);
    }
    intervals.push_back(item);
  }
  root["rows"] = intervals;
  return root.dump(2) + "\n";
}

void emit_report(const MetricsReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file " + path);
  out << render_report(report, format);
  if (!out) throw std::runtime_error("failed writing report file " + path);
}

}  // namespace hfsim
