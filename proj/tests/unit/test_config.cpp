#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "relaysim/config.hpp"

using namespace relaysim;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/relaysim_test_") + name;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("load parses a minimal scenario file") {
  const std::string path = temp_path("minimal.cfg");
  write_file(path,
             "# comment line\n"
             "road_length_m = 4000\n"
             "v2v_range_m = 550\n"
             "rsu_positions_m = 0, 4000\n");
  const ScenarioConfig c = load_scenario(path);
  CHECK(c.road_length_m == 4000.0);
  CHECK(c.v2v_range_m == 550.0);
  REQUIRE(c.rsu_positions_m.size() == 2);
  CHECK(c.rsu_positions_m[1] == 4000.0);
  std::remove(path.c_str());
}

TEST_CASE("load rejects an invalid vehicle count, naming the invariant") {
  const std::string path = temp_path("badcount.cfg");
  write_file(path, "vehicle_count = 0\n");
  CHECK_THROWS_WITH_AS(load_scenario(path),
                       doctest::Contains("vehicle_count >= 1"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("load reports the line of an unknown key") {
  const std::string path = temp_path("unknown.cfg");
  write_file(path, "road_length_m = 1000\nbogus_key = 3\n");
  CHECK_THROWS_WITH_AS(load_scenario(path), doctest::Contains("line 2"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("load reports malformed lines and duplicate keys") {
  const std::string path = temp_path("malformed.cfg");
  write_file(path, "road_length_m 1000\n");
  CHECK_THROWS_WITH_AS(load_scenario(path), doctest::Contains("line 1"),
                       ConfigError);
  write_file(path, "seed = 1\nseed = 2\n");
  CHECK_THROWS_WITH_AS(load_scenario(path), doctest::Contains("duplicate"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("write/load round-trips every built-in scenario") {
  const std::string path = temp_path("roundtrip.cfg");
  for (const auto& [name, config] : builtin_scenarios()) {
    CAPTURE(name);
    write_scenario(config, path);
    const ScenarioConfig loaded = load_scenario(path);
    CHECK(loaded == config);
  }
  std::remove(path.c_str());
}

TEST_CASE("round-trip survives awkward floating-point values") {
  ScenarioConfig c;
  c.road_length_m = 4000.0 / 3.0;
  c.vehicle_count = 17;
  c.v2v_range_m = 0.1 + 0.2;
  c.d2d_range_m = 1234.5678901234567;
  c.speed_min_kmh = 30.000000001;
  c.speed_max_kmh = 99.999999999;
  c.packet_interval_s = 1e-3;
  c.sim_duration_s = 0.0;
  c.d2d_mode = D2dMode::on_demand;
  c.rsu_positions_m = {0.0, 1e-12, 1333.3333333333333};
  c.timing.interference_coeff = 0.019999999999999997;
  c.seed = 18446744073709551615ull;  // max u64
  c.vehicle_positions_m = {1.0, 2.5, 1000.0 / 7.0};
  c.vehicle_count = 3;
  c.gap_m = 600.25;
  c.source_vehicle_id = 2;
  REQUIRE(validate(c).empty());

  const std::string path = temp_path("roundtrip_float.cfg");
  write_scenario(c, path);
  CHECK(load_scenario(path) == c);
  std::remove(path.c_str());
}

TEST_CASE("table1_default written to a file loads back with Table I values") {
  const std::string path = temp_path("table1.cfg");
  write_scenario(resolve_scenario("table1_default"), path);
  const ScenarioConfig c = load_scenario(path);
  CHECK(c.packet_interval_s == 0.5);
  CHECK(c.sim_duration_s == 600.0);
  CHECK(c.speed_min_kmh == 30.0);
  CHECK(c.speed_max_kmh == 100.0);
  const bool known_range = c.v2v_range_m == 250.0 || c.v2v_range_m == 350.0 ||
                           c.v2v_range_m == 550.0;
  CHECK(known_range);
  CHECK(validate(c).empty());
  std::remove(path.c_str());
}

TEST_CASE("built-in list covers every named experiment") {
  const auto builtins = builtin_scenarios();
  const auto find = [&](const std::string& name) -> const ScenarioConfig* {
    for (const auto& [n, c] : builtins) {
      if (n == name) return &c;
    }
    return nullptr;
  };
  for (const char* name :
       {"proactive_1500", "proactive_1000", "proactive_500", "ondemand_1500",
        "ondemand_1000", "ondemand_500", "v2vra_best", "v2vra_worst",
        "fig4_hops_sweep", "fig5_delay_sweep", "fig7_recovery_ladder"}) {
    CAPTURE(name);
    CHECK(find(name) != nullptr);
  }

  const ScenarioConfig* p1500 = find("proactive_1500");
  REQUIRE(p1500);
  CHECK(p1500->d2d_mode == D2dMode::proactive);
  CHECK(p1500->d2d_range_m == 1500.0);
  CHECK(p1500->failure_distance_m == 4000.0);

  const ScenarioConfig* od500 = find("ondemand_500");
  REQUIRE(od500);
  CHECK(od500->d2d_mode == D2dMode::on_demand);
  CHECK(od500->timing.t_discovery_ms > 0.0);
  CHECK(od500->d2d_range_m == 500.0);

  for (const char* name : {"proactive_1500", "proactive_1000", "proactive_500",
                           "ondemand_1500", "ondemand_1000", "ondemand_500"}) {
    CAPTURE(name);
    CHECK(find(name)->failure_distance_m == 4000.0);
  }

  const ScenarioConfig* best = find("v2vra_best");
  REQUIRE(best);
  CHECK(best->d2d_mode == D2dMode::disabled);
}

TEST_CASE("every built-in passes validation") {
  for (const auto& [name, config] : builtin_scenarios()) {
    CAPTURE(name);
    CHECK(validate(config).empty());
  }
}

TEST_CASE("validate flags inverted speed bounds") {
  ScenarioConfig c;
  c.speed_min_kmh = 100.0;
  c.speed_max_kmh = 30.0;
  const auto violations = validate(c);
  bool found = false;
  for (const auto& v : violations) {
    if (v == "speed_min <= speed_max") found = true;
  }
  CHECK(found);
}

TEST_CASE("proactive resolution zeroes discovery and handover") {
  ScenarioConfig c;
  c.d2d_mode = D2dMode::proactive;
  c.timing.t_discovery_ms = 64.0;
  c.timing.t_handover_ms = 10.0;
  CHECK(validate(c).empty());  // stored values stay legal
  const TimingModel t = resolved_timing(c);
  CHECK(t.t_discovery_ms == 0.0);
  CHECK(t.t_handover_ms == 0.0);

  c.d2d_mode = D2dMode::on_demand;
  const TimingModel u = resolved_timing(c);
  CHECK(u.t_discovery_ms == 64.0);
  CHECK(u.t_handover_ms == 10.0);
}

TEST_CASE("resolve_scenario falls through to file paths") {
  CHECK_THROWS_AS(resolve_scenario("/nonexistent/path.cfg"), ConfigError);
  const ScenarioConfig c = resolve_scenario("v2vra_worst");
  CHECK(c.timing.v2v_recovery_per_hop_ms == 200.0);
}

TEST_CASE("fig4 variants expose the three labeled range curves") {
  const auto variants = scenario_variants("fig4_hops_sweep");
  REQUIRE(variants.size() == 3);
  CHECK(variants[0].first == "gpsr_250");
  CHECK(variants[0].second.v2v_range_m == 250.0);
  CHECK(variants[1].first == "gpsr_350");
  CHECK(variants[1].second.v2v_range_m == 350.0);
  CHECK(variants[2].first == "d2d_550");
  CHECK(variants[2].second.v2v_range_m == 550.0);
}

TEST_CASE("fig7 variants expose the five ladder configurations") {
  const auto variants = scenario_variants("fig7_recovery_ladder");
  REQUIRE(variants.size() == 5);
  CHECK(variants[0].first == "d2d_proactive");
  CHECK(variants[0].second.d2d_mode == D2dMode::proactive);
  CHECK(variants[1].first == "d2d_discovery_best");
  CHECK(variants[1].second.timing.t_discovery_ms == 10.0);
  CHECK(variants[2].first == "gpsr_best");
  CHECK(variants[2].second.timing.v2v_recovery_per_hop_ms == 50.0);
  CHECK(variants[3].first == "gpsr_worst");
  CHECK(variants[3].second.timing.v2v_recovery_per_hop_ms == 200.0);
  CHECK(variants[4].first == "d2d_ondemand_worst");
  CHECK(variants[4].second.timing.t_discovery_ms == 500.0);
}
