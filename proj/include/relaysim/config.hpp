#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relaysim {

enum class D2dMode { disabled, proactive, on_demand };

std::string to_string(D2dMode mode);
D2dMode d2d_mode_from_string(const std::string& token);

/// All delay constants of the model, in milliseconds.
struct TimingModel {
  double t_discovery_ms = 64.0;         // D2D discovery latency T_D
  double t_handover_ms = 10.0;          // one .11p <-> D2D handover T_HO
  double per_hop_v2v_ms = 50.0;         // base V2V relay hop cost
  double per_hop_d2d_ms = 100.0;        // D2D bridge hop cost
  double v2v_recovery_per_hop_ms = 50.0;  // one backward recovery hop
  double interference_coeff = 0.02;     // per-neighbor delay inflation

  bool operator==(const TimingModel&) const = default;
};

/// Full experiment description. Loaded from a flat `key = value` file or
/// taken from the built-in presets; immutable once validated.
struct ScenarioConfig {
  double road_length_m = 4000.0;
  int vehicle_count = 100;
  double v2v_range_m = 250.0;
  double d2d_range_m = 550.0;
  double speed_min_kmh = 30.0;
  double speed_max_kmh = 100.0;
  double packet_interval_s = 0.5;
  double packet_size_kb = 256.0;  // carried as metadata, not used in timing
  double sim_duration_s = 600.0;
  D2dMode d2d_mode = D2dMode::disabled;
  std::vector<double> rsu_positions_m = {4000.0};
  // Distance from the injected dead-end to the reference RSU. 0 disables
  // dead-end injection.
  double failure_distance_m = 0.0;
  TimingModel timing;
  std::uint64_t seed = 1;

  // Placement control. Empty -> seeded random placement; otherwise exactly
  // vehicle_count positions (meters, any order).
  std::vector<double> vehicle_positions_m;
  // Width of the injected gap; 0 -> v2v_range_m + 50.
  double gap_m = 0.0;
  // Alert source; -1 -> the vehicle farthest from its nearest RSU.
  int source_vehicle_id = -1;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario file. Unknown keys are rejected; parse
/// errors carry the offending line number, validation errors name the
/// violated invariant.
ScenarioConfig load_scenario(const std::string& path);

/// Writes a config in the same flat format; load_scenario(write) round-trips
/// bit-exactly.
void write_scenario(const ScenarioConfig& config, const std::string& path);

/// Empty result means the config satisfies every invariant; otherwise one
/// short string per violated invariant.
std::vector<std::string> validate(const ScenarioConfig& config);

/// Timing as the simulator actually applies it: proactive discovery and
/// handover resolve to zero regardless of the stored values.
TimingModel resolved_timing(const ScenarioConfig& config);

std::vector<std::pair<std::string, ScenarioConfig>> builtin_scenarios();

/// Built-in name or file path -> validated config. Throws ConfigError.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

/// Labeled config variants behind a sweep/comparison preset. For most
/// scenarios this is the scenario itself under its own name; fig4/fig5
/// expand to the three range curves and fig7 to the five recovery-ladder
/// setups.
std::vector<std::pair<std::string, ScenarioConfig>> scenario_variants(
    const std::string& name);

}  // namespace relaysim
