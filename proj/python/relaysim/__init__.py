"""Highway V2V relay simulator with LTE-D2D failure recovery."""

from ._core import (
    ConfigError,
    D2dMode,
    DeliveryOutcome,
    DeliveryRecord,
    LRest,
    OhtBreakdown,
    RecordedRecovery,
    ScenarioConfig,
    SimResult,
    SimScenarioError,
    TimingModel,
    builtin_scenarios,
    d2d_oht,
    in_range,
    l_rest,
    load_scenario,
    per_hop_delay,
    resolve_scenario,
    resolved_timing,
    run,
    run_metric,
    scenario_variants,
    validate,
    write_scenario,
)

__all__ = [
    "ConfigError",
    "D2dMode",
    "DeliveryOutcome",
    "DeliveryRecord",
    "LRest",
    "OhtBreakdown",
    "RecordedRecovery",
    "ScenarioConfig",
    "SimResult",
    "SimScenarioError",
    "TimingModel",
    "builtin_scenarios",
    "d2d_oht",
    "in_range",
    "l_rest",
    "load_scenario",
    "per_hop_delay",
    "resolve_scenario",
    "resolved_timing",
    "run",
    "run_metric",
    "scenario_variants",
    "validate",
    "write_scenario",
]

__version__ = "0.1.0"
