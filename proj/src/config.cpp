#include "relaysim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace relaysim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(values[i]);
  }
  return out;
}

double parse_double(const std::string& value, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("parse error at line " + std::to_string(line) +
                      ": expected a number, got '" + value + "'");
  }
  if (trim(value.substr(used)) != "") {
    throw ConfigError("parse error at line " + std::to_string(line) +
                      ": trailing characters after number in '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& value, int line) {
  const double v = parse_double(value, line);
  if (v != std::floor(v)) {
    throw ConfigError("parse error at line " + std::to_string(line) +
                      ": expected an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (trim(value.substr(used)) != "") throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("parse error at line " + std::to_string(line) +
                      ": expected an unsigned integer, got '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& value, int line) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError("parse error at line " + std::to_string(line) +
                        ": empty list element");
    }
    out.push_back(parse_double(item, line));
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& key_setters() {
  static const std::map<std::string, Setter> setters = {
      {"road_length_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.road_length_m = parse_double(v, ln);
       }},
      {"vehicle_count",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.vehicle_count = parse_int(v, ln);
       }},
      {"v2v_range_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.v2v_range_m = parse_double(v, ln);
       }},
      {"d2d_range_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.d2d_range_m = parse_double(v, ln);
       }},
      {"speed_min_kmh",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.speed_min_kmh = parse_double(v, ln);
       }},
      {"speed_max_kmh",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.speed_max_kmh = parse_double(v, ln);
       }},
      {"packet_interval_s",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.packet_interval_s = parse_double(v, ln);
       }},
      {"packet_size_kb",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.packet_size_kb = parse_double(v, ln);
       }},
      {"sim_duration_s",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.sim_duration_s = parse_double(v, ln);
       }},
      {"d2d_mode",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         try {
           c.d2d_mode = d2d_mode_from_string(trim(v));
         } catch (const std::exception&) {
           throw ConfigError("parse error at line " + std::to_string(ln) +
                             ": d2d_mode must be one of disabled, proactive, "
                             "on_demand");
         }
       }},
      {"rsu_positions_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.rsu_positions_m = parse_list(v, ln);
       }},
      {"failure_distance_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.failure_distance_m = parse_double(v, ln);
       }},
      {"t_discovery_ms",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.t_discovery_ms = parse_double(v, ln);
       }},
      {"t_handover_ms",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.t_handover_ms = parse_double(v, ln);
       }},
      {"per_hop_v2v_ms",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.per_hop_v2v_ms = parse_double(v, ln);
       }},
      {"per_hop_d2d_ms",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.per_hop_d2d_ms = parse_double(v, ln);
       }},
      {"v2v_recovery_per_hop_ms",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.v2v_recovery_per_hop_ms = parse_double(v, ln);
       }},
      {"interference_coeff",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.timing.interference_coeff = parse_double(v, ln);
       }},
      {"seed",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.seed = parse_u64(v, ln);
       }},
      {"vehicle_positions_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.vehicle_positions_m = parse_list(v, ln);
       }},
      {"gap_m",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.gap_m = parse_double(v, ln);
       }},
      {"source_vehicle_id",
       [](ScenarioConfig& c, const std::string& v, int ln) {
         c.source_vehicle_id = parse_int(v, ln);
       }},
  };
  return setters;
}

}  // namespace

std::string to_string(D2dMode mode) {
  switch (mode) {
    case D2dMode::disabled: return "disabled";
    case D2dMode::proactive: return "proactive";
    case D2dMode::on_demand: return "on_demand";
  }
  return "disabled";
}

D2dMode d2d_mode_from_string(const std::string& token) {
  if (token == "disabled") return D2dMode::disabled;
  if (token == "proactive") return D2dMode::proactive;
  if (token == "on_demand") return D2dMode::on_demand;
  throw ConfigError("unknown d2d_mode '" + token + "'");
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");

  ScenarioConfig config;
  std::vector<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("parse error at line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto& setters = key_setters();
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("parse error at line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("parse error at line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    seen.push_back(key);
    it->second(config, value, line_no);
  }

  const auto violations = validate(config);
  if (!violations.empty()) {
    std::string msg = "validation error: ";
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) msg += "; ";
      msg += violations[i];
    }
    throw ConfigError(msg);
  }
  return config;
}

void write_scenario(const ScenarioConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write scenario file '" + path + "'");
  out << "# relaysim scenario\n";
  out << "road_length_m = " << fmt_double(c.road_length_m) << "\n";
  out << "vehicle_count = " << c.vehicle_count << "\n";
  out << "v2v_range_m = " << fmt_double(c.v2v_range_m) << "\n";
  out << "d2d_range_m = " << fmt_double(c.d2d_range_m) << "\n";
  out << "speed_min_kmh = " << fmt_double(c.speed_min_kmh) << "\n";
  out << "speed_max_kmh = " << fmt_double(c.speed_max_kmh) << "\n";
  out << "packet_interval_s = " << fmt_double(c.packet_interval_s) << "\n";
  out << "packet_size_kb = " << fmt_double(c.packet_size_kb) << "\n";
  out << "sim_duration_s = " << fmt_double(c.sim_duration_s) << "\n";
  out << "d2d_mode = " << to_string(c.d2d_mode) << "\n";
  out << "rsu_positions_m = " << fmt_list(c.rsu_positions_m) << "\n";
  out << "failure_distance_m = " << fmt_double(c.failure_distance_m) << "\n";
  out << "t_discovery_ms = " << fmt_double(c.timing.t_discovery_ms) << "\n";
  out << "t_handover_ms = " << fmt_double(c.timing.t_handover_ms) << "\n";
  out << "per_hop_v2v_ms = " << fmt_double(c.timing.per_hop_v2v_ms) << "\n";
  out << "per_hop_d2d_ms = " << fmt_double(c.timing.per_hop_d2d_ms) << "\n";
  out << "v2v_recovery_per_hop_ms = "
      << fmt_double(c.timing.v2v_recovery_per_hop_ms) << "\n";
  out << "interference_coeff = " << fmt_double(c.timing.interference_coeff)
      << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.vehicle_positions_m.empty()) {
    out << "vehicle_positions_m = " << fmt_list(c.vehicle_positions_m) << "\n";
  }
  out << "gap_m = " << fmt_double(c.gap_m) << "\n";
  out << "source_vehicle_id = " << c.source_vehicle_id << "\n";
}

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> v;
  if (!(c.road_length_m > 0)) v.push_back("road_length_m > 0");
  if (!(c.vehicle_count >= 1)) v.push_back("vehicle_count >= 1");
  if (!(c.v2v_range_m > 0)) v.push_back("v2v_range_m > 0");
  if (!(c.d2d_range_m > 0)) v.push_back("d2d_range_m > 0");
  if (!(c.speed_min_kmh <= c.speed_max_kmh)) {
    v.push_back("speed_min <= speed_max");
  }
  if (!(c.speed_min_kmh > 0 && c.speed_min_kmh <= 200) ||
      !(c.speed_max_kmh > 0 && c.speed_max_kmh <= 200)) {
    v.push_back("speeds within (0, 200]");
  }
  if (!(c.packet_interval_s > 0)) v.push_back("packet_interval_s > 0");
  if (!(c.packet_size_kb >= 0)) v.push_back("packet_size_kb >= 0");
  if (!(c.sim_duration_s >= 0)) v.push_back("sim_duration_s >= 0");
  if (c.rsu_positions_m.empty()) v.push_back("rsu_positions_m nonempty");
  for (double pos : c.rsu_positions_m) {
    if (!(pos >= 0 && pos <= c.road_length_m)) {
      v.push_back("rsu_positions_m within [0, road_length_m]");
      break;
    }
  }
  if (!(c.failure_distance_m >= 0)) v.push_back("failure_distance_m >= 0");
  const TimingModel& t = c.timing;
  if (!(t.t_discovery_ms >= 0 && t.t_handover_ms >= 0 &&
        t.per_hop_v2v_ms >= 0 && t.per_hop_d2d_ms >= 0 &&
        t.v2v_recovery_per_hop_ms >= 0 && t.interference_coeff >= 0)) {
    v.push_back("timing fields >= 0");
  }
  if (!c.vehicle_positions_m.empty()) {
    if (static_cast<int>(c.vehicle_positions_m.size()) != c.vehicle_count) {
      v.push_back("vehicle_positions_m size equals vehicle_count");
    }
    for (double pos : c.vehicle_positions_m) {
      if (!(pos >= 0 && pos <= c.road_length_m)) {
        v.push_back("vehicle_positions_m within [0, road_length_m]");
        break;
      }
    }
  }
  if (!(c.gap_m >= 0)) v.push_back("gap_m >= 0");
  if (!(c.source_vehicle_id >= -1 && c.source_vehicle_id < c.vehicle_count)) {
    v.push_back("source_vehicle_id within [-1, vehicle_count)");
  }
  return v;
}

TimingModel resolved_timing(const ScenarioConfig& c) {
  TimingModel t = c.timing;
  if (c.d2d_mode == D2dMode::proactive) {
    t.t_discovery_ms = 0.0;
    t.t_handover_ms = 0.0;
  }
  return t;
}

namespace {

// Evenly spaced positions in [from, to_exclusive), step `spacing`.
std::vector<double> chain(double from, double to_exclusive, double spacing) {
  std::vector<double> out;
  for (double pos = from; pos < to_exclusive; pos += spacing) {
    out.push_back(pos);
  }
  return out;
}

void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// Shared skeleton of every hand-laid failure scenario: constant 30 km/h so
// relative geometry is stationary, four alerts, no interference term.
ScenarioConfig crafted_base() {
  ScenarioConfig c;
  c.speed_min_kmh = 30.0;
  c.speed_max_kmh = 30.0;
  c.packet_interval_s = 0.5;
  c.sim_duration_s = 2.0;
  c.timing.interference_coeff = 0.0;
  c.timing.per_hop_v2v_ms = 50.0;
  c.timing.per_hop_d2d_ms = 100.0;
  c.timing.v2v_recovery_per_hop_ms = 50.0;
  c.seed = 1;
  return c;
}

// One of the six staged D2D sub-cases: failure 4 km from the RSU, a gap the
// exact width of the D2D range, and 320 m chains on both sides.
ScenarioConfig d2d_case(double d2d_range_m, D2dMode mode) {
  ScenarioConfig c = crafted_base();
  c.road_length_m = 5100.0;
  c.v2v_range_m = 350.0;
  c.d2d_range_m = d2d_range_m;
  c.d2d_mode = mode;
  c.rsu_positions_m = {5000.0};
  c.failure_distance_m = 4000.0;
  c.gap_m = d2d_range_m;
  if (mode == D2dMode::proactive) {
    c.timing.t_discovery_ms = 0.0;
    c.timing.t_handover_ms = 0.0;
  } else {
    c.timing.t_discovery_ms = 64.0;
    c.timing.t_handover_ms = 10.0;
  }
  std::vector<double> pos = {40.0, 360.0, 680.0, 1000.0};  // source side
  append(pos, chain(1000.0 + d2d_range_m, 5000.0, 320.0));
  c.vehicle_positions_m = pos;
  c.vehicle_count = static_cast<int>(pos.size());
  c.source_vehicle_id = 0;
  return c;
}

// Pure-V2V recovery geometry: front RSU unreachable past a 600 m gap, rear
// RSU reachable back down the chain. The worst case plants an off-trace
// vehicle at 1550 so the redirect burns an extra backward hop.
ScenarioConfig v2vra_case(bool worst) {
  ScenarioConfig c = crafted_base();
  c.road_length_m = 5800.0;
  c.v2v_range_m = 550.0;
  c.d2d_range_m = 1000.0;
  c.d2d_mode = D2dMode::disabled;
  c.rsu_positions_m = {0.0, 5800.0};
  c.failure_distance_m = 4000.0;
  c.gap_m = 600.0;
  c.timing.v2v_recovery_per_hop_ms = worst ? 200.0 : 50.0;
  std::vector<double> pos = {300.0, 800.0, 1300.0, 1800.0};
  if (worst) pos.insert(pos.begin() + 3, 1550.0);
  append(pos, chain(2400.0, 5800.0, 500.0));
  c.vehicle_positions_m = pos;
  c.vehicle_count = static_cast<int>(pos.size());
  c.source_vehicle_id = 0;
  return c;
}

// Base geometry of the recovery-time ladder: three forward hops to the dead
// end, a 700 m gap, a single RSU so V2V-RA exhausts after exactly three
// backward hops while the hybrid bridges over.
ScenarioConfig fig7_base() {
  ScenarioConfig c = crafted_base();
  c.road_length_m = 5750.0;
  c.v2v_range_m = 550.0;
  c.d2d_range_m = 1000.0;
  c.d2d_mode = D2dMode::on_demand;
  c.timing.t_discovery_ms = 64.0;
  c.timing.t_handover_ms = 10.0;
  c.rsu_positions_m = {5650.0};
  c.failure_distance_m = 4000.0;
  c.gap_m = 700.0;
  std::vector<double> pos = {150.0, 650.0, 1150.0, 1650.0};
  append(pos, chain(2350.0, 5650.0, 500.0));
  c.vehicle_positions_m = pos;
  c.vehicle_count = static_cast<int>(pos.size());
  c.source_vehicle_id = 0;
  return c;
}

// Density sweep over a 2 km path, one RSU at the far end.
ScenarioConfig fig_sweep_base() {
  ScenarioConfig c;
  c.road_length_m = 2000.0;
  c.vehicle_count = 60;
  c.v2v_range_m = 250.0;
  c.d2d_range_m = 550.0;
  c.d2d_mode = D2dMode::disabled;
  c.rsu_positions_m = {2000.0};
  c.failure_distance_m = 0.0;
  c.timing.interference_coeff = 0.02;
  c.seed = 1;
  return c;
}

ScenarioConfig table1_default() {
  ScenarioConfig c;
  c.road_length_m = 4000.0;
  c.vehicle_count = 100;
  c.v2v_range_m = 250.0;
  c.d2d_range_m = 550.0;
  c.speed_min_kmh = 30.0;
  c.speed_max_kmh = 100.0;
  c.packet_interval_s = 0.5;
  c.packet_size_kb = 256.0;
  c.sim_duration_s = 600.0;
  c.d2d_mode = D2dMode::disabled;
  c.rsu_positions_m = {4000.0};
  c.failure_distance_m = 0.0;
  c.seed = 1;
  return c;
}

}  // namespace

std::vector<std::pair<std::string, ScenarioConfig>> builtin_scenarios() {
  std::vector<std::pair<std::string, ScenarioConfig>> out;
  out.emplace_back("proactive_1500", d2d_case(1500.0, D2dMode::proactive));
  out.emplace_back("proactive_1000", d2d_case(1000.0, D2dMode::proactive));
  out.emplace_back("proactive_500", d2d_case(500.0, D2dMode::proactive));
  out.emplace_back("ondemand_1500", d2d_case(1500.0, D2dMode::on_demand));
  out.emplace_back("ondemand_1000", d2d_case(1000.0, D2dMode::on_demand));
  out.emplace_back("ondemand_500", d2d_case(500.0, D2dMode::on_demand));
  out.emplace_back("v2vra_best", v2vra_case(false));
  out.emplace_back("v2vra_worst", v2vra_case(true));
  out.emplace_back("fig4_hops_sweep", fig_sweep_base());
  out.emplace_back("fig5_delay_sweep", fig_sweep_base());
  out.emplace_back("fig7_recovery_ladder", fig7_base());
  out.emplace_back("table1_default", table1_default());
  return out;
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  for (const auto& [name, config] : builtin_scenarios()) {
    if (name == name_or_path) return config;
  }
  return load_scenario(name_or_path);
}

std::vector<std::pair<std::string, ScenarioConfig>> scenario_variants(
    const std::string& name) {
  std::vector<std::pair<std::string, ScenarioConfig>> out;
  if (name == "fig4_hops_sweep" || name == "fig5_delay_sweep") {
    for (double range : {250.0, 350.0, 550.0}) {
      ScenarioConfig c = fig_sweep_base();
      c.v2v_range_m = range;
      const std::string label =
          (range == 550.0)
              ? "d2d_550"
              : "gpsr_" + std::to_string(static_cast<int>(range));
      out.emplace_back(label, c);
    }
    return out;
  }
  if (name == "fig7_recovery_ladder") {
    ScenarioConfig proactive = fig7_base();
    proactive.d2d_mode = D2dMode::proactive;
    proactive.timing.t_discovery_ms = 0.0;
    proactive.timing.t_handover_ms = 0.0;
    out.emplace_back("d2d_proactive", proactive);

    ScenarioConfig best = fig7_base();
    best.timing.t_discovery_ms = 10.0;
    out.emplace_back("d2d_discovery_best", best);

    ScenarioConfig gpsr_best = fig7_base();
    gpsr_best.d2d_mode = D2dMode::disabled;
    gpsr_best.timing.v2v_recovery_per_hop_ms = 50.0;
    out.emplace_back("gpsr_best", gpsr_best);

    ScenarioConfig gpsr_worst = fig7_base();
    gpsr_worst.d2d_mode = D2dMode::disabled;
    gpsr_worst.timing.v2v_recovery_per_hop_ms = 200.0;
    out.emplace_back("gpsr_worst", gpsr_worst);

    ScenarioConfig worst = fig7_base();
    worst.timing.t_discovery_ms = 500.0;
    out.emplace_back("d2d_ondemand_worst", worst);
    return out;
  }
  out.emplace_back(name, resolve_scenario(name));
  return out;
}

}  // namespace relaysim
