#include <cmath>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "hfsim/controller.hpp"
#include "hfsim/rng.hpp"

using namespace hfsim;

namespace {

FlowKey key_of(uint32_t id) {
  FlowKey key;
  key.src_ip = id;
  key.dst_ip = 4;
  key.proto = 6;
  return key;
}

Packet sample_of(uint32_t id, uint32_t size = 64) {
  Packet pkt;
  pkt.key = key_of(id);
  pkt.size = size;
  return pkt;
}

PickConfig basic_config(double T = 0.5, double t = 0.25, double p = 0.01, size_t v = 16) {
  PickConfig cfg;
  cfg.heavy_threshold = T;
  cfg.suspect_threshold = t;
  cfg.sample_probability = p;
  cfg.hh_capacity = v;
  return cfg;
}

}  // namespace

TEST_CASE("derive_params reproduces the analysis formulas") {
  auto r = derive_params(5e-3, 1e-2, 1e6);
  // T_min = 9(1-p)/(Np)
  CHECK(std::abs(r.heavy_threshold_min - 8.91e-4) / 8.91e-4 < 1e-9);
  // t_max = T - 3*sqrt(T(1-p))/sqrt(Np), evaluated independently
  double expected_t_max = 5e-3 - 3.0 * std::sqrt(5e-3 * 0.99) / std::sqrt(1e4);
  CHECK(std::abs(r.t_max - expected_t_max) / expected_t_max < 1e-12);
  CHECK(r.t_max == doctest::Approx(2.889e-3).epsilon(2e-4));
  CHECK(r.feasible);

  // v floor for the run's chosen t; the evaluation used the stricter v=2000.
  auto with_t = derive_params(5e-3, 1e-2, 1e6, 2e-3);
  CHECK(with_t.v_min == 1000);

  auto infeasible = derive_params(1e-4, 1e-2, 1e6);
  CHECK_FALSE(infeasible.feasible);
  CHECK(infeasible.heavy_threshold_min > 1e-4);
}

TEST_CASE("first sample installs at the boundary threshold") {
  PickController ctl(basic_config(0.9, 0.5, 0.01, 4));
  auto cmd = ctl.on_sample(sample_of(1));
  REQUIRE(cmd.has_value());  // estimate 1 >= 0.5 * total 1
  CHECK(*cmd == key_of(1));
  CHECK(ctl.installed().count(key_of(1)) == 1);
}

TEST_CASE("uniform stream stops installing once totals grow") {
  PickConfig cfg = basic_config(0.5, 0.1, 0.01, 64);
  PickController ctl(cfg);
  Rng rng(3);
  size_t installs_after_warmup = 0;
  for (int i = 0; i < 20000; ++i) {
    uint32_t id = static_cast<uint32_t>(rng.next_below(1000));
    bool warm = ctl.total() > 3.0 / cfg.suspect_threshold;
    if (ctl.on_sample(sample_of(id)) && warm) ++installs_after_warmup;
  }
  CHECK(installs_after_warmup == 0);  // no uniform flow reaches 10%
}

TEST_CASE("install cap: exactly ceil(1/t) installs, no overflow") {
  PickConfig cfg = basic_config(0.9, 0.25, 0.01, 8);  // cap = ceil(1/0.25) = 4
  CHECK(cfg.install_cap() == 4);
  PickController ctl(cfg);
  size_t installs = 0;
  // Four flows in round robin sit exactly at fraction t; all become
  // suspects at the closed threshold and install.
  for (uint32_t id = 0; id < 4; ++id)
    if (ctl.on_sample(sample_of(id))) ++installs;
  CHECK(installs == 4);
  // A fifth suspect crafted above t is blocked by the cap, without error.
  for (int i = 0; i < 20; ++i) CHECK_FALSE(ctl.on_sample(sample_of(99)).has_value());
  CHECK(ctl.installed().size() == 4);
}

TEST_CASE("cap arithmetic for the evaluation parameters") {
  PickConfig cfg = basic_config(5e-3, 2e-3, 1.0 / 1024, 2000);
  CHECK(cfg.install_cap() == 500);
  CHECK(cfg.capacity_sufficient());  // v=2000 >= 2/t=1000
}

TEST_CASE("poll feedback scales deltas by the sampling probability") {
  PickConfig cfg = basic_config(0.5, 0.25, 1e-2, 16);
  PickController ctl(cfg);
  ctl.on_sample(sample_of(1));  // installs

  SUBCASE("zero delta leaves the structure unchanged") {
    double before = ctl.hh().estimate(key_of(1));
    std::vector<CounterSnapshot> snap{{key_of(1), 0, 0}};
    ctl.on_poll(snap);
    CHECK(ctl.hh().estimate(key_of(1)) == before);
    CHECK(ctl.total() == 1);
  }

  SUBCASE("delta 10^4 at p=10^-2 inserts weight 100") {
    std::vector<CounterSnapshot> snap{{key_of(1), 10000, 640000}};
    ctl.on_poll(snap);
    CHECK(ctl.hh().estimate(key_of(1)) == doctest::Approx(1.0 + 100.0));
    CHECK(ctl.total() == doctest::Approx(101.0));
  }

  SUBCASE("counters going backwards raise NegativeDelta") {
    std::vector<CounterSnapshot> snap{{key_of(1), 10, 640}};
    ctl.on_poll(snap);
    std::vector<CounterSnapshot> bad{{key_of(1), 9, 576}};
    CHECK_THROWS_AS(ctl.on_poll(bad), NegativeDelta);
  }
}

TEST_CASE("poll additivity: two polls equal one combined poll") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    PickController split_ctl(basic_config());
    PickController joint_ctl(basic_config());
    split_ctl.on_sample(sample_of(1));
    joint_ctl.on_sample(sample_of(1));

    uint64_t total = 200 + rng.next_below(10000);
    uint64_t mid = rng.next_below(total);

    std::vector<CounterSnapshot> first{{key_of(1), mid, mid * 64}};
    std::vector<CounterSnapshot> second{{key_of(1), total, total * 64}};
    split_ctl.on_poll(first);
    split_ctl.on_poll(second);
    joint_ctl.on_poll(second);

    CHECK(split_ctl.total() == joint_ctl.total());
    auto a = split_ctl.hh().entries_snapshot();
    auto b = joint_ctl.hh().entries_snapshot();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].first == b[i].first);
      CHECK(a[i].second.count == doctest::Approx(b[i].second.count).epsilon(1e-12));
    }
  }
}

TEST_CASE("feedback conservation holds exactly") {
  PickController ctl(basic_config(0.5, 0.25, 1.0 / 128, 16));
  for (uint32_t id = 0; id < 3; ++id) ctl.on_sample(sample_of(id));
  std::vector<CounterSnapshot> snap{{key_of(0), 1000, 64000}, {key_of(1), 42, 2688}};
  ctl.on_poll(snap);
  snap = {{key_of(0), 1500, 96000}, {key_of(1), 42, 2688}};
  ctl.on_poll(snap);
  CHECK(ctl.raw_sample_weight() == 3);
  CHECK(ctl.polled_delta_weight() == 1542);
  CHECK(ctl.total() == 3.0 + (1.0 / 128) * 1542.0);
}

TEST_CASE("report_heavy estimates and threshold boundary") {
  PickConfig cfg = basic_config(0.5, 0.25, 0.5, 16);
  PickController ctl(cfg);

  SUBCASE("single-flow stream reports fraction ~1") {
    for (int i = 0; i < 10; ++i) ctl.on_sample(sample_of(1));
    auto report = ctl.report_heavy();
    REQUIRE(report.size() == 1);
    CHECK(report[0].key == key_of(1));
    CHECK(report[0].fraction == doctest::Approx(1.0));
    CHECK(report[0].mode == EstimateMode::ExactCounted);  // installed on first sample
  }

  SUBCASE("a flow at exactly T*total is included") {
    // Two flows, one sample each, T=0.5: both sit exactly at the bar.
    ctl.on_sample(sample_of(1));
    ctl.on_sample(sample_of(2));
    auto report = ctl.report_heavy();
    CHECK(report.size() == 2);
  }

  SUBCASE("sampled-only flows are estimated as count / p") {
    PickConfig tight = basic_config(0.05, 0.04, 0.5, 64);
    PickController c2(tight);
    // Saturate the install cap (ceil(1/0.04) = 25) with distinct flows.
    for (uint32_t id = 100; id < 125; ++id) c2.on_sample(sample_of(id));
    CHECK(c2.installed().size() == 25);
    // The next flow cannot install; its estimate comes from samples alone.
    for (int i = 0; i < 30; ++i) c2.on_sample(sample_of(999));
    auto report = c2.report_heavy();
    bool found = false;
    for (const auto& row : report) {
      if (row.key == key_of(999)) {
        found = true;
        CHECK(row.mode == EstimateMode::SampledOnly);
        CHECK(row.estimated_volume == doctest::Approx(30.0 / 0.5));
      }
    }
    CHECK(found);
  }
}

TEST_CASE("expired rules retire their store entries and can re-install") {
  PickConfig cfg = basic_config(0.9, 0.5, 0.01, 8);
  PickController ctl(cfg);
  ctl.on_sample(sample_of(1));
  std::vector<CounterSnapshot> snap{{key_of(1), 500, 32000}};
  ctl.on_poll(snap);
  ctl.on_rule_expired(key_of(1));
  CHECK(ctl.installed().empty());
  // Re-suspicion reinstalls (the HH entry decayed naturally, so the
  // estimate is still present and high).
  auto cmd = ctl.on_sample(sample_of(1));
  CHECK(cmd.has_value());
}

TEST_CASE("suspect soundness: flows above t are installed or tracked") {
  PickConfig cfg = basic_config(0.2, 0.05, 0.1, 64);
  PickController ctl(cfg);
  Rng rng(6);
  std::unordered_map<uint32_t, int> sampled;
  for (int i = 0; i < 5000; ++i) {
    uint32_t id = static_cast<uint32_t>(rng.next_below(1 + rng.next_below(100)));
    ++sampled[id];
    ctl.on_sample(sample_of(id));
  }
  for (const auto& [id, count] : sampled) {
    if (count >= cfg.suspect_threshold * ctl.total()) {
      bool covered =
          ctl.installed().count(key_of(id)) > 0 || ctl.hh().find(key_of(id)) != nullptr;
      CHECK(covered);
    }
  }
}
