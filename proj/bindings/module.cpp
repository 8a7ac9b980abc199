#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaysim/config.hpp"
#include "relaysim/d2d.hpp"
#include "relaysim/engine.hpp"
#include "relaysim/metrics.hpp"
#include "relaysim/radio.hpp"

namespace py = pybind11;
using namespace relaysim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Highway V2V relay simulator with LTE-D2D failure recovery";

  py::enum_<D2dMode>(m, "D2dMode")
      .value("disabled", D2dMode::disabled)
      .value("proactive", D2dMode::proactive)
      .value("on_demand", D2dMode::on_demand);

  py::enum_<DeliveryOutcome>(m, "DeliveryOutcome")
      .value("delivered", DeliveryOutcome::delivered)
      .value("failed", DeliveryOutcome::failed);

  py::enum_<RecordedRecovery>(m, "RecordedRecovery")
      .value("none", RecordedRecovery::none)
      .value("redirect_neighbor", RecordedRecovery::redirect_neighbor)
      .value("alternate_rsu", RecordedRecovery::alternate_rsu)
      .value("d2d_fallback", RecordedRecovery::d2d_fallback)
      .value("exhausted", RecordedRecovery::exhausted);

  py::class_<TimingModel>(m, "TimingModel")
      .def(py::init<>())
      .def_readwrite("t_discovery_ms", &TimingModel::t_discovery_ms)
      .def_readwrite("t_handover_ms", &TimingModel::t_handover_ms)
      .def_readwrite("per_hop_v2v_ms", &TimingModel::per_hop_v2v_ms)
      .def_readwrite("per_hop_d2d_ms", &TimingModel::per_hop_d2d_ms)
      .def_readwrite("v2v_recovery_per_hop_ms",
                     &TimingModel::v2v_recovery_per_hop_ms)
      .def_readwrite("interference_coeff", &TimingModel::interference_coeff);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("road_length_m", &ScenarioConfig::road_length_m)
      .def_readwrite("vehicle_count", &ScenarioConfig::vehicle_count)
      .def_readwrite("v2v_range_m", &ScenarioConfig::v2v_range_m)
      .def_readwrite("d2d_range_m", &ScenarioConfig::d2d_range_m)
      .def_readwrite("speed_min_kmh", &ScenarioConfig::speed_min_kmh)
      .def_readwrite("speed_max_kmh", &ScenarioConfig::speed_max_kmh)
      .def_readwrite("packet_interval_s", &ScenarioConfig::packet_interval_s)
      .def_readwrite("packet_size_kb", &ScenarioConfig::packet_size_kb)
      .def_readwrite("sim_duration_s", &ScenarioConfig::sim_duration_s)
      .def_readwrite("d2d_mode", &ScenarioConfig::d2d_mode)
      .def_readwrite("rsu_positions_m", &ScenarioConfig::rsu_positions_m)
      .def_readwrite("failure_distance_m", &ScenarioConfig::failure_distance_m)
      .def_readwrite("timing", &ScenarioConfig::timing)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("vehicle_positions_m",
                     &ScenarioConfig::vehicle_positions_m)
      .def_readwrite("gap_m", &ScenarioConfig::gap_m)
      .def_readwrite("source_vehicle_id", &ScenarioConfig::source_vehicle_id)
      .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) {
        return a == b;
      });

  py::class_<OhtBreakdown>(m, "OhtBreakdown")
      .def_readonly("t_discovery_ms", &OhtBreakdown::t_discovery_ms)
      .def_readonly("t_handover_total_ms", &OhtBreakdown::t_handover_total_ms)
      .def_readonly("t_v2v_rest_ms", &OhtBreakdown::t_v2v_rest_ms)
      .def_readonly("total_ms", &OhtBreakdown::total_ms);

  py::class_<LRest>(m, "LRest")
      .def_readonly("rest_m", &LRest::rest_m)
      .def_readonly("direct_delivery", &LRest::direct_delivery);

  py::class_<DeliveryRecord>(m, "DeliveryRecord")
      .def_readonly("msg_id", &DeliveryRecord::msg_id)
      .def_readonly("outcome", &DeliveryRecord::outcome)
      .def_readonly("total_hops", &DeliveryRecord::total_hops)
      .def_readonly("v2v_hops", &DeliveryRecord::v2v_hops)
      .def_readonly("d2d_hops", &DeliveryRecord::d2d_hops)
      .def_readonly("e2e_delay_ms", &DeliveryRecord::e2e_delay_ms)
      .def_readonly("recovery_delay_ms", &DeliveryRecord::recovery_delay_ms)
      .def_readonly("recovery_overhead_ms",
                    &DeliveryRecord::recovery_overhead_ms)
      .def_readonly("recovery_method", &DeliveryRecord::recovery_method)
      .def_readonly("oht", &DeliveryRecord::oht);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("config_echo", &SimResult::config_echo)
      .def_readonly("deliveries", &SimResult::deliveries)
      .def_readonly("wall_time_s", &SimResult::wall_time_s);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ScenarioError>(m, "SimScenarioError");

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("write_scenario", &write_scenario, py::arg("config"), py::arg("path"));
  m.def("validate", &validate, py::arg("config"));
  m.def("resolved_timing", &resolved_timing, py::arg("config"));
  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("resolve_scenario", &resolve_scenario, py::arg("name_or_path"));
  m.def("scenario_variants", &scenario_variants, py::arg("name"));

  m.def(
      "run", [](const ScenarioConfig& config) { return run(config); },
      py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("in_range", &in_range, py::arg("pos_a"), py::arg("pos_b"),
        py::arg("range_m"));
  m.def("per_hop_delay", &per_hop_delay, py::arg("base_ms"),
        py::arg("neighbor_count"), py::arg("interference_coeff"));
  m.def("l_rest", &l_rest, py::arg("total_distance_m"),
        py::arg("d2d_range_m"));
  m.def("d2d_oht", &d2d_oht, py::arg("t_discovery_ms"),
        py::arg("t_handover_ms"), py::arg("t_v2v_rest_ms"));
  m.def("run_metric", &run_metric, py::arg("deliveries"), py::arg("metric"));
}
