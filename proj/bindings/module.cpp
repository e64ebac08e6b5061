#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "saginopt/baselines.hpp"
#include "saginopt/cached_solver.hpp"
#include "saginopt/config_io.hpp"
#include "saginopt/fading.hpp"
#include "saginopt/harness.hpp"
#include "saginopt/linkmodel.hpp"
#include "saginopt/noncached_solver.hpp"
#include "saginopt/scenario.hpp"

namespace py = pybind11;
using namespace saginopt;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Space-air-ground content delivery: link models, PER bounds and "
            "the association/bandwidth solvers";

  // link model
  m.def("db_to_linear", &db_to_linear, py::arg("db"));
  m.def("linear_to_db", &linear_to_db, py::arg("linear"));
  m.def("path_loss", &path_loss, py::arg("wavelength_m"), py::arg("distance_m"));
  m.def("shannon_rate", &shannon_rate, py::arg("bandwidth_hz"), py::arg("snr"));
  m.def("g2s_rate", &g2s_rate, py::arg("omega"), py::arg("c_const"),
        py::arg("bandwidth_hz"));
  m.def("tx_delay", &tx_delay, py::arg("ratio"), py::arg("packets"),
        py::arg("packet_bits"), py::arg("capacity_bps"));
  m.def("prop_delay", &prop_delay, py::arg("distance_m"));

  py::class_<LinkParams>(m, "LinkParams")
      .def(py::init<>())
      .def_readwrite("tx_power_w", &LinkParams::tx_power_w)
      .def_readwrite("tx_gain", &LinkParams::tx_gain)
      .def_readwrite("rx_gain", &LinkParams::rx_gain)
      .def_readwrite("add_loss", &LinkParams::add_loss)
      .def_readwrite("frequency_hz", &LinkParams::frequency_hz)
      .def_readwrite("bandwidth_hz", &LinkParams::bandwidth_hz)
      .def_readwrite("noise_psd", &LinkParams::noise_psd)
      .def_readwrite("fading_gain", &LinkParams::fading_gain)
      .def("wavelength_m", &LinkParams::wavelength_m);
  m.def("link_snr", &link_snr, py::arg("params"), py::arg("distance_m"));

  // fading / PER bounds
  py::class_<PerModel>(m, "PerModel")
      .def_readonly("packet_bits", &PerModel::packet_bits)
      .def_readonly("label", &PerModel::label)
      .def_static("shadowed_rician", &PerModel::shadowed_rician, py::arg("b0"),
                  py::arg("m"), py::arg("omega"), py::arg("packet_bits"),
                  py::arg("label"))
      .def_static("loo", &PerModel::loo, py::arg("mu"), py::arg("d0"),
                  py::arg("b0"), py::arg("packet_bits"), py::arg("label"));
  m.def("ils_model", &ils_model, py::arg("packet_bits") = 1023);
  m.def("fhs_model", &fhs_model, py::arg("packet_bits") = 1023);
  m.def("as_model", &as_model, py::arg("packet_bits") = 1023);
  m.def("loo_model", &loo_model, py::arg("packet_bits") = 1023);
  m.def("awgn_per", &awgn_per, py::arg("snr"), py::arg("packet_bits"));
  m.def("kummer_1f1", &kummer_1f1, py::arg("m"), py::arg("x"));
  m.def("bessel_i0", &bessel_i0, py::arg("x"));
  m.def("c0_integral", &c0_integral, py::arg("packet_bits"));
  m.def("per_upper_sr", &per_upper_sr, py::arg("avg_snr"), py::arg("model"));
  m.def("per_upper_loo", &per_upper_loo, py::arg("avg_snr"), py::arg("model"));

  // scenario
  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def_readwrite("num_planes", &ScenarioSpec::num_planes)
      .def_readwrite("sats_per_plane", &ScenarioSpec::sats_per_plane)
      .def_readwrite("altitude_m", &ScenarioSpec::altitude_m)
      .def_readwrite("max_isl", &ScenarioSpec::max_isl)
      .def_readwrite("num_aircraft", &ScenarioSpec::num_aircraft)
      .def_readwrite("request_probability", &ScenarioSpec::request_probability)
      .def_readwrite("rng_seed", &ScenarioSpec::rng_seed)
      .def("num_satellites", &ScenarioSpec::num_satellites);
  m.def("default_scenario", &default_scenario);
  m.def("scenario_from_json", &scenario_from_json, py::arg("text"));
  m.def("scenario_to_json", &scenario_to_json, py::arg("spec"));
  m.def("orbital_period_s", &orbital_period_s, py::arg("altitude_m"));

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z);
  py::class_<NodePositions>(m, "NodePositions")
      .def_readonly("satellites", &NodePositions::satellites)
      .def_readonly("aircraft", &NodePositions::aircraft)
      .def_readonly("ground", &NodePositions::ground);
  m.def("propagate", &propagate, py::arg("spec"), py::arg("slot"));

  // solver instances and solutions
  py::class_<CandidateLink>(m, "CandidateLink")
      .def(py::init([](int sat_id, double capacity_bps, double prop_delay_s) {
             return CandidateLink{sat_id, capacity_bps, prop_delay_s};
           }),
           py::arg("sat_id"), py::arg("capacity_bps"),
           py::arg("prop_delay_s") = 0.0);
  py::class_<CachedRequester>(m, "CachedRequester")
      .def(py::init<>())
      .def_readwrite("sat_id", &CachedRequester::sat_id)
      .def_readwrite("file_packets", &CachedRequester::file_packets)
      .def_readwrite("candidates", &CachedRequester::candidates)
      .def_readwrite("g2s_capacity_bps", &CachedRequester::g2s_capacity_bps);
  py::class_<CachedInstance>(m, "CachedInstance")
      .def(py::init<>())
      .def_readwrite("requesters", &CachedInstance::requesters)
      .def_readwrite("packet_bits", &CachedInstance::packet_bits)
      .def_readwrite("max_isl", &CachedInstance::max_isl);
  py::class_<EpmIterate>(m, "EpmIterate")
      .def_readonly("iteration", &EpmIterate::iteration)
      .def_readonly("objective_s", &EpmIterate::objective_s)
      .def_readonly("residual", &EpmIterate::residual)
      .def_readonly("epsilon", &EpmIterate::epsilon);
  py::class_<AssociationSolution>(m, "AssociationSolution")
      .def_readonly("links", &AssociationSolution::links)
      .def_readonly("ratios", &AssociationSolution::ratios)
      .def_readonly("gs_ratio", &AssociationSolution::gs_ratio)
      .def_readonly("phase1_delay_s", &AssociationSolution::phase1_delay_s)
      .def_readonly("objective_s", &AssociationSolution::objective_s)
      .def_readonly("trace", &AssociationSolution::trace)
      .def_readonly("iteration_cap_hit", &AssociationSolution::iteration_cap_hit);
  py::class_<EpmOptions>(m, "EpmOptions")
      .def(py::init<>())
      .def_readwrite("epsilon0", &EpmOptions::epsilon0)
      .def_readwrite("growth", &EpmOptions::growth)
      .def_readwrite("tolerance", &EpmOptions::tolerance);
  m.def("epm_associate", &epm_associate, py::arg("instance"),
        py::arg("options") = EpmOptions{});
  m.def("exhaustive_cached", &exhaustive_cached, py::arg("instance"),
        py::arg("max_binary_vars") = 24);
  m.def("greedy_cached", &greedy_cached, py::arg("instance"));

  py::class_<RelayOption>(m, "RelayOption")
      .def(py::init([](int sat_id, double isl_capacity_bps, int band_slot,
                       double prop_delay_s) {
             return RelayOption{sat_id, isl_capacity_bps, band_slot,
                                prop_delay_s};
           }),
           py::arg("sat_id"), py::arg("isl_capacity_bps"), py::arg("band_slot"),
           py::arg("prop_delay_s") = 0.0);
  py::class_<BandSlot>(m, "BandSlot")
      .def(py::init([](int gs_id, int sat_id, double c_const,
                       double bandwidth_hz) {
             return BandSlot{gs_id, sat_id, c_const, bandwidth_hz};
           }),
           py::arg("gs_id"), py::arg("sat_id"), py::arg("c_const"),
           py::arg("bandwidth_hz"));
  py::class_<NonCachedRequester>(m, "NonCachedRequester")
      .def(py::init<>())
      .def_readwrite("sat_id", &NonCachedRequester::sat_id)
      .def_readwrite("file_packets", &NonCachedRequester::file_packets)
      .def_readwrite("relays", &NonCachedRequester::relays);
  py::class_<NonCachedInstance>(m, "NonCachedInstance")
      .def(py::init<>())
      .def_readwrite("case2", &NonCachedInstance::case2)
      .def_readwrite("band_slots", &NonCachedInstance::band_slots)
      .def_readwrite("packet_bits", &NonCachedInstance::packet_bits)
      .def_readwrite("max_isl", &NonCachedInstance::max_isl);
  py::class_<AoIterate>(m, "AoIterate")
      .def_readonly("iteration", &AoIterate::iteration)
      .def_readonly("objective_s", &AoIterate::objective_s);
  py::class_<NonCachedSolution>(m, "NonCachedSolution")
      .def_readonly("assoc", &NonCachedSolution::assoc)
      .def_readonly("omega", &NonCachedSolution::omega)
      .def_readonly("outer_trace", &NonCachedSolution::outer_trace)
      .def_readonly("objective_s", &NonCachedSolution::objective_s);
  m.def(
      "ao_solve",
      [](const NonCachedInstance& inst, std::vector<double> omega0) {
        return ao_solve(inst, std::move(omega0));
      },
      py::arg("instance"), py::arg("omega0") = std::vector<double>{});
  m.def("equal_bandwidth", &equal_bandwidth, py::arg("instance"));
  m.def("rounding_assoc", &rounding_assoc, py::arg("instance"));
  m.def("sca_product", &sca_product, py::arg("rho"), py::arg("omega"),
        py::arg("c_const"));
  m.def("sca_upper_bound", &sca_upper_bound, py::arg("rho"), py::arg("omega"),
        py::arg("rho0"), py::arg("omega0"), py::arg("c_const"));

  // experiment harness
  m.def("run_experiment", [](const std::string& config_json) {
    ExperimentConfig config = experiment_from_json(config_json);
    return rows_to_csv(run(config));
  });
}
