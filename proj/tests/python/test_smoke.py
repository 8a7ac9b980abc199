"""Smoke tests for the Python bindings."""

import math

import pytest

import relaysim


def test_builtin_scenarios_cover_the_experiments():
    names = [name for name, _ in relaysim.builtin_scenarios()]
    for expected in [
        "proactive_1500",
        "ondemand_500",
        "v2vra_best",
        "v2vra_worst",
        "fig4_hops_sweep",
        "fig7_recovery_ladder",
    ]:
        assert expected in names


def test_l_rest_matches_the_known_values():
    assert relaysim.l_rest(4000.0, 1500.0).rest_m == 2500.0
    assert relaysim.l_rest(4000.0, 1000.0).rest_m == 3000.0
    assert relaysim.l_rest(4000.0, 500.0).rest_m == 3500.0
    assert relaysim.l_rest(1000.0, 1500.0).direct_delivery


def test_oht_breakdown_is_additive():
    oht = relaysim.d2d_oht(64.0, 10.0, 250.0)
    assert oht.total_ms == 334.0
    assert oht.t_handover_total_ms == 20.0
    assert abs(
        oht.total_ms
        - (oht.t_discovery_ms + oht.t_handover_total_ms + oht.t_v2v_rest_ms)
    ) <= 1e-9


def test_proactive_resolution_zeroes_discovery():
    cfg = relaysim.resolve_scenario("proactive_1500")
    timing = relaysim.resolved_timing(cfg)
    assert timing.t_discovery_ms == 0.0
    assert timing.t_handover_ms == 0.0


def test_run_delivers_through_the_bridge():
    result = relaysim.run(relaysim.resolve_scenario("proactive_1500"))
    assert len(result.deliveries) == 4
    for record in result.deliveries:
        assert record.outcome == relaysim.DeliveryOutcome.delivered
        assert record.recovery_method == relaysim.RecordedRecovery.d2d_fallback
        assert record.d2d_hops == 1
        assert record.oht.t_discovery_ms == 0.0
        assert record.total_hops == record.v2v_hops + record.d2d_hops


def test_runs_are_deterministic():
    cfg = relaysim.resolve_scenario("fig4_hops_sweep")
    cfg.sim_duration_s = 10.0
    a = relaysim.run(cfg)
    b = relaysim.run(cfg)
    key = lambda r: (r.msg_id, r.total_hops, r.e2e_delay_ms, r.outcome)
    assert [key(r) for r in a.deliveries] == [key(r) for r in b.deliveries]


def test_validate_and_roundtrip(tmp_path):
    cfg = relaysim.ScenarioConfig()
    cfg.vehicle_count = 0
    assert any("vehicle_count" in v for v in relaysim.validate(cfg))

    cfg = relaysim.resolve_scenario("v2vra_worst")
    path = str(tmp_path / "scenario.cfg")
    relaysim.write_scenario(cfg, path)
    assert relaysim.load_scenario(path) == cfg

    with pytest.raises(relaysim.ConfigError):
        relaysim.resolve_scenario("/nonexistent/file.cfg")


def test_run_metric_reduces_deliveries():
    result = relaysim.run(relaysim.resolve_scenario("v2vra_best"))
    ratio = relaysim.run_metric(result.deliveries, "delivery_ratio")
    assert ratio == 1.0
    assert not math.isnan(relaysim.run_metric(result.deliveries, "hops"))
