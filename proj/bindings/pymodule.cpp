// SPDX-License-Identifier: Apache-2.0
//
// pybind11 surface over the passkit core: scenario/geometry, hardware,
// activation, channel, capacity regions, metrics, beamforming optimizers,
// wideband OFDM and CSI acquisition.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "passkit/activation.hpp"
#include "passkit/beamforming.hpp"
#include "passkit/capacity.hpp"
#include "passkit/csi.hpp"
#include "passkit/experiments.hpp"
#include "passkit/hardware.hpp"
#include "passkit/metrics.hpp"
#include "passkit/wideband.hpp"

namespace py = pybind11;
using namespace passkit;

PYBIND11_MODULE(_passkit, m) {
    m.doc() = "pinching-antenna system simulation toolkit";
    m.attr("__version__") = version();

    py::register_exception<Error>(m, "PasskitError");

    // ---- geometry -----------------------------------------------------
    py::class_<RfConstants>(m, "RfConstants")
        .def(py::init<>())
        .def_readwrite("wavelength", &RfConstants::wavelength)
        .def_readwrite("n_eff", &RfConstants::n_eff)
        .def_readwrite("eta", &RfConstants::eta)
        .def_readwrite("noise_power", &RfConstants::noise_power)
        .def_readwrite("transmit_power", &RfConstants::transmit_power)
        .def("eta_amp", &RfConstants::eta_amp);

    py::class_<Waveguide>(m, "Waveguide")
        .def(py::init<>())
        .def_readwrite("y", &Waveguide::y)
        .def_readwrite("z", &Waveguide::z)
        .def_readwrite("length", &Waveguide::length)
        .def_readwrite("delta_min", &Waveguide::delta_min);

    py::class_<UserPosition>(m, "UserPosition")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) {
                 return UserPosition{x, y, z};
             }),
             py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &UserPosition::x)
        .def_readwrite("y", &UserPosition::y)
        .def_readwrite("z", &UserPosition::z);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("constants", &Scenario::constants)
        .def_readwrite("waveguides", &Scenario::waveguides)
        .def_readwrite("users", &Scenario::users)
        .def("validate", &Scenario::validate);

    m.def("lateral_offset", &lateral_offset);
    m.def("pa_user_distance", &pa_user_distance);
    m.def("scenario_from_file", &scenario_from_file);
    m.def("scenario_from_string", &scenario_from_string);
    m.def("scenario_to_string", &scenario_to_string);
    m.def("default_two_user_scenario", &default_two_user_scenario);
    m.def("default_multiuser_scenario", &default_multiuser_scenario);

    // ---- hardware --------------------------------------------------------
    py::class_<CouplerSpec>(m, "CouplerSpec")
        .def(py::init<>())
        .def_readwrite("omega0", &CouplerSpec::omega0)
        .def_readwrite("gamma0", &CouplerSpec::gamma0)
        .def_readwrite("n_clad", &CouplerSpec::n_clad)
        .def_readwrite("spacing", &CouplerSpec::spacing)
        .def_readwrite("length", &CouplerSpec::length);

    py::class_<ScatteringSpec>(m, "ScatteringSpec")
        .def(py::init<>())
        .def_readwrite("S", &ScatteringSpec::S)
        .def_readwrite("gamma_s", &ScatteringSpec::gamma_s)
        .def_readwrite("gamma_l", &ScatteringSpec::gamma_l)
        .def_readwrite("gamma_r", &ScatteringSpec::gamma_r)
        .def_readwrite("gamma_g", &ScatteringSpec::gamma_g)
        .def_readwrite("l1", &ScatteringSpec::l1)
        .def_readwrite("l2", &ScatteringSpec::l2);

    py::class_<CouplerSplit>(m, "CouplerSplit")
        .def_readonly("through", &CouplerSplit::through)
        .def_readonly("radiated", &CouplerSplit::radiated);

    py::class_<ScatteringCheck>(m, "ScatteringCheck")
        .def_readonly("ok", &ScatteringCheck::pass)
        .def_readonly("sigma_max", &ScatteringCheck::sigma_max);

    m.def("coupling_coefficient", &coupling_coefficient);
    m.def("coupler_split", &coupler_split);
    m.def("cascade_radiation", &cascade_radiation);
    m.def("residual_power", &residual_power);
    m.def("equal_power_deltas", &equal_power_deltas, py::arg("num_pas"),
          py::arg("p_eq") = -1.0);
    m.def("proportional_power", &proportional_power);
    m.def("waveguide_gamma", &waveguide_gamma, py::arg("wavelength"),
          py::arg("n_eff"), py::arg("attenuation_db_per_m") = 0.01);
    m.def("multiport_transfer", &multiport_transfer);
    m.def("multiport_chain", &multiport_chain);
    m.def("validate_scattering", &validate_scattering);
    m.def("scattering_from_csv", &scattering_from_csv);

    // ---- activation --------------------------------------------------------
    py::class_<ActivationMode>(m, "ActivationMode")
        .def_static("discrete", &ActivationMode::discrete)
        .def_static("continuous", &ActivationMode::continuous)
        .def_static("semi_continuous", &ActivationMode::semi_continuous)
        .def_static("parse", &ActivationMode::parse, py::arg("name"),
                    py::arg("m_total") = 0, py::arg("u_max") = 0.0);

    py::class_<Feasibility>(m, "Feasibility")
        .def_readonly("ok", &Feasibility::ok)
        .def_readonly("violation", &Feasibility::violation)
        .def("__bool__", [](const Feasibility &f) { return f.ok; });

    m.def("discrete_grid", &discrete_grid);
    m.def("is_feasible", &is_feasible);
    m.def("project_feasible", &project_feasible);

    // ---- channel --------------------------------------------------------
    py::class_<PinchConfig>(m, "PinchConfig")
        .def(py::init<>())
        .def_readwrite("positions", &PinchConfig::positions)
        .def_readwrite("power", &PinchConfig::power)
        .def_static("equal_power", &PinchConfig::equal_power)
        .def("validate", &PinchConfig::validate);

    py::class_<NlosPath>(m, "NlosPath")
        .def(py::init([](double a, double p) {
                 return NlosPath{a, p};
             }),
             py::arg("amplitude"), py::arg("phase"))
        .def_readwrite("amplitude", &NlosPath::amplitude)
        .def_readwrite("phase", &NlosPath::phase);

    m.def("los_channel", &los_channel);
    m.def("waveguide_vector", &waveguide_vector);
    m.def("multipath_gain", &multipath_gain);
    m.def("random_nlos_paths", &random_nlos_paths);
    m.def("effective_gain",
          py::overload_cast<const cvec &, const cvec &>(&effective_gain));

    // ---- capacity --------------------------------------------------------
    py::class_<RatePair>(m, "RatePair")
        .def(py::init([](double r1, double r2) {
                 return RatePair{r1, r2};
             }),
             py::arg("r1"), py::arg("r2"))
        .def_readwrite("r1", &RatePair::r1)
        .def_readwrite("r2", &RatePair::r2);

    py::class_<RateRegion>(m, "RateRegion")
        .def_readonly("points", &RateRegion::points)
        .def_readonly("hull", &RateRegion::hull)
        .def_static("from_points", &RateRegion::from_points)
        .def("area", &RateRegion::area)
        .def("max_r1", &RateRegion::max_r1)
        .def("max_r2", &RateRegion::max_r2)
        .def("contains", &RateRegion::contains, py::arg("p"), py::arg("tol") = 1e-9);

    py::class_<DecodingOrder>(m, "DecodingOrder")
        .def(py::init([](int first, int second) {
                 return DecodingOrder{first, second};
             }),
             py::arg("first"), py::arg("second"))
        .def_readwrite("first", &DecodingOrder::first)
        .def_readwrite("second", &DecodingOrder::second);

    py::class_<SearchSettings>(m, "SearchSettings")
        .def(py::init<>())
        .def_readwrite("grid_points", &SearchSettings::grid_points)
        .def_readwrite("refine_passes", &SearchSettings::refine_passes)
        .def_readwrite("tolerance", &SearchSettings::tolerance)
        .def_readwrite("max_sweeps", &SearchSettings::max_sweeps)
        .def_readwrite("sweep_order", &SearchSettings::sweep_order);

    py::class_<CapacitySettings>(m, "CapacitySettings")
        .def(py::init<>())
        .def_readwrite("alpha_points", &CapacitySettings::alpha_points)
        .def_readwrite("single_pinch_grid", &CapacitySettings::single_pinch_grid)
        .def_readwrite("bandwidth_grid", &CapacitySettings::bandwidth_grid)
        .def_readwrite("search", &CapacitySettings::search);

    py::enum_<OmaMode>(m, "OmaMode")
        .value("TDMA", OmaMode::Tdma)
        .value("FDMA", OmaMode::Fdma);

    m.def("convex_hull", &convex_hull);
    m.def("region_subset", &region_subset, py::arg("inner"), py::arg("outer"),
          py::arg("tol") = 1e-9);
    m.def("uplink_gain2", &uplink_gain2);
    m.def("uplink_pentagon", &uplink_pentagon);
    m.def("single_pinch_capacity", &single_pinch_capacity);
    m.def("rate_profile_boundary", &rate_profile_boundary, py::arg("scenario"),
          py::arg("p1"), py::arg("p2"), py::arg("num_pas"), py::arg("order"),
          py::arg("alphas"), py::arg("settings") = CapacitySettings{});
    m.def("capacity_region", &capacity_region, py::arg("scenario"), py::arg("p1"),
          py::arg("p2"), py::arg("num_pas"), py::arg("settings") = CapacitySettings{});
    m.def("oma_region", &oma_region, py::arg("scenario"), py::arg("p1"), py::arg("p2"),
          py::arg("num_pas"), py::arg("mode"), py::arg("settings") = CapacitySettings{});
    m.def("downlink_region", &downlink_region, py::arg("scenario"), py::arg("total_power"),
          py::arg("num_pas"), py::arg("split_points"),
          py::arg("settings") = CapacitySettings{});
    m.def("fixed_antenna_region", &fixed_antenna_region);

    // ---- metrics --------------------------------------------------------
    py::class_<ServiceRegion>(m, "ServiceRegion")
        .def(py::init([](double dx, double dy) {
                 return ServiceRegion{dx, dy};
             }),
             py::arg("dx"), py::arg("dy"))
        .def_static("square", &ServiceRegion::square)
        .def_readwrite("dx", &ServiceRegion::dx)
        .def_readwrite("dy", &ServiceRegion::dy);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("p", &McEstimate::p)
        .def_readonly("lo", &McEstimate::lo)
        .def_readonly("hi", &McEstimate::hi)
        .def_readonly("trials", &McEstimate::trials);

    py::class_<OutageResult>(m, "OutageResult")
        .def_readonly("outage", &OutageResult::outage)
        .def_readonly("high_snr", &OutageResult::high_snr);

    m.def("ergodic_rate_pass", &ergodic_rate_pass);
    m.def("ergodic_rate_fixed", &ergodic_rate_fixed);
    m.def("high_snr_gap_bound", &high_snr_gap_bound);
    m.def("coverage_pass", &coverage_pass);
    m.def("coverage_fixed_mc", &coverage_fixed_mc);
    m.def("outage_pass", &outage_pass);
    m.def("outage_pass_mc", &outage_pass_mc);
    m.def("outage_fixed_highsnr", &outage_fixed_highsnr);
    m.def("outage_fixed_mc", &outage_fixed_mc);
    m.def("wilson_interval", &wilson_interval);

    // ---- beamforming --------------------------------------------------------
    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("x", &SearchResult::x)
        .def_readonly("power", &SearchResult::power)
        .def_readonly("sweeps", &SearchResult::sweeps)
        .def_readonly("trace", &SearchResult::trace);

    py::class_<OptimalPas>(m, "OptimalPas")
        .def_readonly("formula", &OptimalPas::formula)
        .def_readonly("argmax", &OptimalPas::argmax);

    py::class_<ScalingPoint>(m, "ScalingPoint")
        .def_readonly("num_pas", &ScalingPoint::num_pas)
        .def_readonly("p_opt", &ScalingPoint::p_opt)
        .def_readonly("p_approx", &ScalingPoint::p_approx)
        .def_readonly("scaled", &ScalingPoint::scaled);

    py::class_<SubConnectedResult>(m, "SubConnectedResult")
        .def_readonly("positions", &SubConnectedResult::positions)
        .def_readonly("w", &SubConnectedResult::w)
        .def_readonly("p_r", &SubConnectedResult::p_r);

    py::class_<FullyConnectedResult>(m, "FullyConnectedResult")
        .def_readonly("positions", &FullyConnectedResult::positions)
        .def_readonly("w_rf", &FullyConnectedResult::w_rf)
        .def_readonly("w_bb", &FullyConnectedResult::w_bb)
        .def_readonly("p_r", &FullyConnectedResult::p_r);

    py::class_<MuResult>(m, "MuResult")
        .def_readonly("positions", &MuResult::positions)
        .def_readonly("w", &MuResult::w)
        .def_readonly("power_alloc", &MuResult::power_alloc)
        .def_readonly("user_rates", &MuResult::user_rates)
        .def_readonly("wsr", &MuResult::wsr)
        .def_readonly("beamformer", &MuResult::beamformer)
        .def_readonly("trace", &MuResult::trace);

    m.def("receive_power",
          py::overload_cast<const Scenario &, size_t, const std::vector<double> &,
                            const std::vector<double> &, size_t>(&receive_power));
    m.def("receive_power_equal",
          py::overload_cast<const Scenario &, size_t, const std::vector<double> &, size_t>(
              &receive_power));
    m.def("elementwise_search", &elementwise_search, py::arg("scenario"),
          py::arg("waveguide"), py::arg("user"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{},
          py::arg("init") = std::optional<std::vector<double>>{});
    m.def("position_refinement", &position_refinement);
    m.def("single_waveguide_optimize", &single_waveguide_optimize, py::arg("scenario"),
          py::arg("waveguide"), py::arg("user"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{});
    m.def("max_power_approx", &max_power_approx);
    m.def("f_ub", &f_ub);
    m.def("optimal_num_pas", &optimal_num_pas);
    m.def("scaling_law_curve", &scaling_law_curve);
    m.def("mrt", &mrt);
    m.def("effective_gains", &effective_gains);
    m.def("subconnected_optimize", &subconnected_optimize, py::arg("scenario"),
          py::arg("user"), py::arg("num_pas"), py::arg("settings") = SearchSettings{});
    m.def("fullyconnected_optimize", &fullyconnected_optimize, py::arg("scenario"),
          py::arg("user"), py::arg("num_pas"), py::arg("num_rf"),
          py::arg("settings") = SearchSettings{});
    m.def("ws_wsr", &ws_wsr, py::arg("scenario"), py::arg("weights"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{});
    m.def("wd_wsr", &wd_wsr, py::arg("scenario"), py::arg("weights"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{});
    m.def("wm_wsr", &wm_wsr, py::arg("scenario"), py::arg("weights"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{});

    // ---- wideband --------------------------------------------------------
    py::class_<WaveguideDispersion>(m, "WaveguideDispersion")
        .def(py::init<>())
        .def_readwrite("r_o", &WaveguideDispersion::r_o)
        .def_readwrite("n_o", &WaveguideDispersion::n_o)
        .def_readwrite("n_c", &WaveguideDispersion::n_c)
        .def_readwrite("v", &WaveguideDispersion::v)
        .def_readwrite("n_eff", &WaveguideDispersion::n_eff)
        .def_static("default_curve", &WaveguideDispersion::default_curve)
        .def_static("from_csv", &WaveguideDispersion::from_csv);

    py::class_<OfdmGrid>(m, "OfdmGrid")
        .def(py::init<>())
        .def_readwrite("f", &OfdmGrid::f)
        .def_readwrite("f_center", &OfdmGrid::f_center)
        .def_readwrite("l_cp", &OfdmGrid::l_cp)
        .def_readwrite("sample_rate", &OfdmGrid::sample_rate)
        .def_static("uniform", &OfdmGrid::uniform);

    py::class_<WidebandResult>(m, "WidebandResult")
        .def_readonly("x", &WidebandResult::x)
        .def_readonly("rate", &WidebandResult::rate)
        .def_readonly("sum_objective", &WidebandResult::sum_objective);

    m.def("single_mode_max_frequency", &single_mode_max_frequency);
    m.def("te10_lower_cutoff", &te10_lower_cutoff);
    m.def("n_eff_at", &n_eff_at);
    m.def("validate_band", &validate_band, py::arg("grid"), py::arg("dispersion"),
          py::arg("lower_cutoff") = 0.0);
    m.def("cp_length", &cp_length);
    m.def("ofdm_rate", &ofdm_rate, py::arg("x"), py::arg("grid"), py::arg("dispersion"),
          py::arg("scenario"), py::arg("user") = 0);
    m.def("wideband_optimize", &wideband_optimize, py::arg("grid"), py::arg("dispersion"),
          py::arg("scenario"), py::arg("num_pas"), py::arg("settings") = SearchSettings{},
          py::arg("user") = 0);
    m.def("narrowband_center_positions", &narrowband_center_positions, py::arg("grid"),
          py::arg("dispersion"), py::arg("scenario"), py::arg("num_pas"),
          py::arg("settings") = SearchSettings{}, py::arg("user") = 0);

    // ---- csi --------------------------------------------------------
    py::class_<EquivalentPilot>(m, "EquivalentPilot")
        .def_readonly("matrix", &EquivalentPilot::matrix)
        .def_readonly("rank", &EquivalentPilot::rank);

    py::class_<SequentialLsResult>(m, "SequentialLsResult")
        .def_readonly("h_hat", &SequentialLsResult::h_hat)
        .def_readonly("residuals", &SequentialLsResult::residuals)
        .def_readonly("slots", &SequentialLsResult::slots)
        .def_readonly("nmse", &SequentialLsResult::nmse);

    py::class_<Dictionary>(m, "Dictionary")
        .def_readonly("psi", &Dictionary::psi)
        .def_readonly("sin_theta", &Dictionary::sin_theta);

    py::class_<OmpStop>(m, "OmpStop")
        .def(py::init<>())
        .def_readwrite("sparsity", &OmpStop::sparsity)
        .def_readwrite("residual", &OmpStop::residual);

    py::class_<OmpResult>(m, "OmpResult")
        .def_readonly("support", &OmpResult::support)
        .def_readonly("coeffs", &OmpResult::coeffs)
        .def_readonly("h_hat", &OmpResult::h_hat)
        .def_readonly("residual_norm", &OmpResult::residual_norm)
        .def_readonly("residual_trace", &OmpResult::residual_trace);

    py::class_<SenseSettings>(m, "SenseSettings")
        .def(py::init<>())
        .def_readwrite("xr_points", &SenseSettings::xr_points)
        .def_readwrite("zeta_points", &SenseSettings::zeta_points)
        .def_readwrite("zeta_min", &SenseSettings::zeta_min)
        .def_readwrite("zeta_max", &SenseSettings::zeta_max);

    py::class_<ParameterSenseResult>(m, "ParameterSenseResult")
        .def_readonly("x_r", &ParameterSenseResult::x_r)
        .def_readonly("zeta", &ParameterSenseResult::zeta)
        .def_readonly("residual", &ParameterSenseResult::residual);

    py::class_<Codebooks>(m, "Codebooks")
        .def(py::init<>())
        .def_readwrite("positions", &Codebooks::positions)
        .def_readwrite("beams", &Codebooks::beams);

    py::class_<BeamTrainResult>(m, "BeamTrainResult")
        .def_readonly("best_position", &BeamTrainResult::best_position)
        .def_readonly("best_beam", &BeamTrainResult::best_beam)
        .def_readonly("measured_gain", &BeamTrainResult::measured_gain)
        .def_readonly("true_gain", &BeamTrainResult::true_gain)
        .def_readonly("measurements", &BeamTrainResult::measurements);

    py::class_<HierarchicalSpec>(m, "HierarchicalSpec")
        .def(py::init<>())
        .def_readwrite("x_lo", &HierarchicalSpec::x_lo)
        .def_readwrite("x_hi", &HierarchicalSpec::x_hi)
        .def_readwrite("y_lo", &HierarchicalSpec::y_lo)
        .def_readwrite("y_hi", &HierarchicalSpec::y_hi)
        .def_readwrite("cells_x", &HierarchicalSpec::cells_x)
        .def_readwrite("cells_y", &HierarchicalSpec::cells_y)
        .def_readwrite("fine_x", &HierarchicalSpec::fine_x)
        .def_readwrite("fine_y", &HierarchicalSpec::fine_y);

    py::class_<HierarchicalResult>(m, "HierarchicalResult")
        .def_readonly("x", &HierarchicalResult::x)
        .def_readonly("y", &HierarchicalResult::y)
        .def_readonly("measured_gain", &HierarchicalResult::measured_gain)
        .def_readonly("true_gain", &HierarchicalResult::true_gain)
        .def_readonly("measurements", &HierarchicalResult::measurements);

    m.def("inwaveguide_matrix", &inwaveguide_matrix);
    m.def("stacked_channel", &stacked_channel);
    m.def("equivalent_pilot_matrix", &equivalent_pilot_matrix);
    m.def("ls_sequential", &ls_sequential);
    m.def("planar_dictionary", &planar_dictionary, py::arg("scenario"), py::arg("config"),
          py::arg("atoms") = 0);
    m.def("omp_recover", &omp_recover);
    m.def("los_point_response", &los_point_response);
    m.def("probe_sweep", &probe_sweep);
    m.def("parameter_sense", &parameter_sense, py::arg("scenario"), py::arg("probe_x"),
          py::arg("y"), py::arg("settings") = SenseSettings{});
    m.def("beam_train_exhaustive", &beam_train_exhaustive);
    m.def("beam_train_hierarchical", &beam_train_hierarchical);
    m.def("pa_placement_gain", &pa_placement_gain);

    // ---- experiments --------------------------------------------------------
    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("id", &ExperimentSpec::id)
        .def_readwrite("scenario_path", &ExperimentSpec::scenario_path)
        .def_readwrite("out_dir", &ExperimentSpec::out_dir)
        .def_readwrite("seed", &ExperimentSpec::seed)
        .def_readwrite("threads", &ExperimentSpec::threads)
        .def_readwrite("params", &ExperimentSpec::params);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("csv_files", &RunResult::csv_files)
        .def_readonly("manifest_path", &RunResult::manifest_path)
        .def_readonly("wall_seconds", &RunResult::wall_seconds);

    py::class_<VerifyResult>(m, "VerifyResult")
        .def_readonly("ok", &VerifyResult::pass)
        .def_readonly("margin", &VerifyResult::margin)
        .def_readonly("detail", &VerifyResult::detail);

    m.def("list_experiments", &list_experiments);
    m.def("list_checks", &list_checks);
    m.def("run_experiment", &run_experiment);
    m.def("verify_csv", &verify_csv);
}
