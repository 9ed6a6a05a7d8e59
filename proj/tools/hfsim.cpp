#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hfsim/controller.hpp"
#include "hfsim/harness.hpp"
#include "hfsim/trace.hpp"

using namespace hfsim;

namespace {

int cmd_run(const std::string& config_path, std::optional<uint64_t> seed,
            const std::string& out_path) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  MetricsReport report = run_experiment(cfg);

  ReportFormat format = ReportFormat::Csv;
  if (out_path.size() >= 5 && out_path.substr(out_path.size() - 5) == ".json")
    format = ReportFormat::Json;
  if (out_path.empty() || out_path == "-") {
    std::cout << render_report(report, format);
  } else {
    emit_report(report, format, out_path);
    std::cerr << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_derive(double T, double p, double N, std::optional<double> t) {
  DeriveResult r = derive_params(T, p, N, t);
  std::printf("T_min    %.9g\n", r.heavy_threshold_min);
  std::printf("t_max    %.9g\n", r.t_max);
  std::printf("v_min    %zu\n", r.v_min);
  std::printf("feasible %s\n", r.feasible ? "yes" : "no");
  return r.feasible ? 0 : 1;
}

int cmd_gen_trace(const ZipfConfig& cfg, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  out << "# zipf flows=" << cfg.flow_count << " alpha=" << cfg.alpha
      << " packets=" << cfg.packet_count << " rate=" << cfg.rate << " seed=" << cfg.seed
      << "\n";
  ZipfTraceGenerator gen(cfg);
  while (auto pkt = gen.next()) out << format_trace_record(*pkt) << "\n";
  std::cerr << "wrote " << cfg.packet_count << " packets to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavy-flow detection simulator"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_path;
  std::optional<uint64_t> seed;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_path, "report path (.csv or .json); stdout when omitted");

  // derive-params
  double T = 0, p = 0, N = 0;
  std::optional<double> chosen_t;
  auto* derive = app.add_subcommand("derive-params", "compute t_max / T_min / v_min");
  derive->add_option("--T", T, "heavy threshold")->required();
  derive->add_option("--p", p, "sampling probability")->required();
  derive->add_option("--N", N, "stream length (packets)")->required();
  derive->add_option("--t", chosen_t, "chosen suspect threshold (defaults to t_max)");

  // gen-trace
  ZipfConfig zcfg;
  std::string trace_out;
  uint32_t fixed_size = 0;
  auto* gen = app.add_subcommand("gen-trace", "write a synthetic Zipf trace CSV");
  gen->add_option("--flows", zcfg.flow_count, "distinct flows")->required();
  gen->add_option("--alpha", zcfg.alpha, "Zipf exponent")->required();
  gen->add_option("--packets", zcfg.packet_count, "packet count")->required();
  gen->add_option("--rate", zcfg.rate, "packets per virtual second")->required();
  gen->add_option("--seed", zcfg.seed, "generator seed");
  gen->add_option("--fixed-size", fixed_size, "use one packet size instead of the 7:4:1 mix");
  gen->add_flag("--zero-checksums", zcfg.zero_checksums,
                "adversarial all-zero checksum trace");
  gen->add_option("--out", trace_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_path);
    if (derive->parsed()) return cmd_derive(T, p, N, chosen_t);
    if (gen->parsed()) {
      if (fixed_size) zcfg.size_dist = SizeDistribution::fixed(fixed_size);
      return cmd_gen_trace(zcfg, trace_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
