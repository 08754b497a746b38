#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cavitytrio/analytic.hpp"
#include "cavitytrio/dynamics.hpp"
#include "cavitytrio/model.hpp"
#include "cavitytrio/noise.hpp"
#include "cavitytrio/stability.hpp"
#include "cavitytrio/tuning.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cavitytrio;

namespace {

GainModel to_gain(const py::object& obj) {
    if (py::isinstance<ConstantGain>(obj)) return obj.cast<ConstantGain>();
    if (py::isinstance<SaturatingGain>(obj)) return obj.cast<SaturatingGain>();
    throw py::type_error("expected ConstantGain or SaturatingGain");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coupled-resonator transparency engine";

    py::register_exception<Error>(m, "CavityTrioError");

    py::enum_<Role>(m, "Role")
        .value("Passive", Role::Passive)
        .value("Active", Role::Active);

    py::enum_<Frame>(m, "Frame")
        .value("Rotating", Frame::Rotating)
        .value("Lab", Frame::Lab);

    py::enum_<Regime>(m, "Regime")
        .value("Stable", Regime::Stable)
        .value("Marginal", Regime::Marginal)
        .value("Unstable", Regime::Unstable);

    py::class_<Resonator>(m, "Resonator")
        .def(py::init<double, Role, double, double>(), "omega_mhz"_a, "role"_a, "rate_mhz"_a,
             "intrinsic_loss_mhz"_a = 0.0)
        .def_readwrite("omega_mhz", &Resonator::omega_mhz)
        .def_readwrite("role", &Resonator::role)
        .def_readwrite("rate_mhz", &Resonator::rate_mhz)
        .def_readwrite("intrinsic_loss_mhz", &Resonator::intrinsic_loss_mhz);

    py::class_<ResonatorChain>(m, "ResonatorChain")
        .def(py::init([](std::vector<Resonator> resonators, std::vector<double> couplings,
                         double kappa_ex) {
                 ResonatorChain chain{std::move(resonators), std::move(couplings), kappa_ex};
                 require_valid(chain);
                 return chain;
             }),
             "resonators"_a, "couplings_mhz"_a, "kappa_ex_mhz"_a)
        .def_readwrite("resonators", &ResonatorChain::resonators)
        .def_readwrite("couplings_mhz", &ResonatorChain::couplings_mhz)
        .def_readwrite("kappa_ex_mhz", &ResonatorChain::kappa_ex_mhz)
        .def("__len__", &ResonatorChain::size);

    py::class_<PumpDrive>(m, "PumpDrive")
        .def(py::init<double, double>(), "omega_p_mhz"_a, "amplitude_sqrt_mhz"_a)
        .def_static("from_power", &PumpDrive::from_power, "omega_p_mhz"_a, "power_watts"_a,
                    "wavelength_m"_a)
        .def_readwrite("omega_p_mhz", &PumpDrive::omega_p_mhz)
        .def_readwrite("amplitude_sqrt_mhz", &PumpDrive::amplitude_sqrt_mhz);

    py::class_<ConstantGain>(m, "ConstantGain")
        .def(py::init<double>(), "kappa2_mhz"_a)
        .def_readwrite("kappa2_mhz", &ConstantGain::kappa2_mhz);

    py::class_<SaturatingGain>(m, "SaturatingGain")
        .def(py::init<double, double, double>(), "kappa20_mhz"_a, "saturation_intensity"_a,
             "gamma2_mhz"_a = 0.0)
        .def_readwrite("kappa20_mhz", &SaturatingGain::kappa20_mhz)
        .def_readwrite("saturation_intensity", &SaturatingGain::saturation_intensity)
        .def_readwrite("gamma2_mhz", &SaturatingGain::gamma2_mhz);

    m.def("validate_chain", [](const ResonatorChain& chain) -> std::optional<std::string> {
        if (auto violation = validate_chain(chain)) {
            return std::string(errc_name(violation->code)) + ": " + violation->detail;
        }
        return std::nullopt;
    });
    m.def("dynamical_matrix", &dynamical_matrix, "chain"_a, "gain_mhz"_a, "omega_p_mhz"_a,
          "frame"_a = Frame::Rotating);
    m.def("pump_amplitude_from_power", &pump_amplitude_from_power, "power_watts"_a,
          "wavelength_m"_a);
    m.def("power_from_amplitude", &power_from_amplitude, "amplitude_sqrt_mhz"_a,
          "wavelength_m"_a);

    py::class_<SteadySolution>(m, "SteadySolution")
        .def_readonly("amplitudes", &SteadySolution::amplitudes)
        .def_readonly("susceptibility", &SteadySolution::susceptibility)
        .def_readonly("transmission", &SteadySolution::transmission)
        .def_readonly("detuning_x_mhz", &SteadySolution::detuning_x_mhz);

    m.def("steady_state_exact", &steady_state_exact, "chain"_a, "gain_mhz"_a, "pump"_a);
    m.def("steady_state_continued_fraction", &steady_state_continued_fraction, "chain"_a,
          "gain_mhz"_a, "pump"_a);
    m.def(
        "susceptibility_spectrum",
        [](const ResonatorChain& chain, double gain, double kappa_ex,
           const std::vector<double>& grid) {
            return susceptibility_spectrum(chain, gain, kappa_ex, grid);
        },
        "chain"_a, "gain_mhz"_a, "kappa_ex_mhz"_a, "x_grid_mhz"_a);
    m.def("transmission", &transmission, "solution"_a);

    py::class_<TransparencyPoint>(m, "TransparencyPoint")
        .def_readonly("j2_mhz", &TransparencyPoint::j2_mhz)
        .def_readonly("omega_p_mhz", &TransparencyPoint::omega_p_mhz);

    m.def("transparency_condition_general", &transparency_condition_general, "kappa2_mhz"_a,
          "kappa3_mhz"_a, "omega2_mhz"_a, "omega3_mhz"_a);
    m.def("transparency_condition_four", &transparency_condition_four, "kappa2_mhz"_a,
          "kappa3_mhz"_a, "kappa4_mhz"_a, "j3_mhz"_a, "omega0_mhz"_a = 0.0);
    m.def("dark_state", &dark_state, "chain"_a, "gain_mhz"_a, "pump"_a);

    py::class_<DarkBrightBasis>(m, "DarkBrightBasis")
        .def_readonly("dark_coeffs", &DarkBrightBasis::dark_coeffs)
        .def_readonly("bright_coeffs", &DarkBrightBasis::bright_coeffs);

    m.def("dark_bright_basis", &dark_bright_basis, "kappa2_mhz"_a, "kappa3_mhz"_a);
    m.def("imag_slope_at_resonance", &imag_slope_at_resonance, "kappa_ex_mhz"_a, "kappa2_mhz"_a,
          "kappa3_mhz"_a, "j1_mhz"_a);
    m.def("group_delay", &group_delay, "chain"_a, "gain_mhz"_a, "pump"_a, "d_omega_mhz"_a);

    py::class_<TransparencyWindow>(m, "TransparencyWindow")
        .def_readonly("fwhm_mhz", &TransparencyWindow::fwhm_mhz)
        .def_readonly("small_j1_estimate_mhz", &TransparencyWindow::small_j1_estimate_mhz);

    m.def("fwhm_transparency_window", &fwhm_transparency_window, "chain"_a, "gain_mhz"_a,
          "kappa_ex_mhz"_a);

    py::class_<CooperativityResult>(m, "CooperativityResult")
        .def_readonly("cooperativity", &CooperativityResult::cooperativity)
        .def_readonly("transmission", &CooperativityResult::transmission);

    m.def("cooperativity_transmission", &cooperativity_transmission, "kappa1_mhz"_a,
          "kappa2_mhz"_a, "j1_mhz"_a);

    py::class_<EvolveControls>(m, "EvolveControls")
        .def(py::init<>())
        .def_readwrite("rel_tol", &EvolveControls::rel_tol)
        .def_readwrite("abs_tol_factor", &EvolveControls::abs_tol_factor)
        .def_readwrite("steady_tol", &EvolveControls::steady_tol)
        .def_readwrite("steady_window_us", &EvolveControls::steady_window_us)
        .def_readwrite("divergence_factor", &EvolveControls::divergence_factor)
        .def_readwrite("max_samples", &EvolveControls::max_samples)
        .def_readwrite("initial", &EvolveControls::initial);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times_us", &Trajectory::times_us)
        .def_readonly("amplitudes", &Trajectory::amplitudes)
        .def_readonly("gain_trace_mhz", &Trajectory::gain_trace_mhz)
        .def_readonly("stabilized_at_us", &Trajectory::stabilized_at_us)
        .def_readonly("final", &Trajectory::final)
        .def_readonly("drive_scale_sqrt_mhz", &Trajectory::drive_scale_sqrt_mhz)
        .def_readonly("gain_ceiling_mhz", &Trajectory::gain_ceiling_mhz)
        .def_readonly("noise_floor_sqrt_mhz", &Trajectory::noise_floor_sqrt_mhz);

    m.def(
        "evolve",
        [](const ResonatorChain& chain, const py::object& gain, const PumpDrive& pump,
           double t_end, const EvolveControls& controls) {
            return evolve(chain, to_gain(gain), pump, t_end, controls);
        },
        "chain"_a, "gain"_a, "pump"_a, "t_end_us"_a, "controls"_a = EvolveControls{});
    m.def("detect_steady", &detect_steady, "trajectory"_a, "window_us"_a, "steady_tol"_a);
    m.def("final_photon_numbers", &final_photon_numbers, "trajectory"_a);

    m.def("eigenvalues", &eigenvalues, "matrix"_a);

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("eigenvalues", &StabilityReport::eigenvalues)
        .def_readonly("max_real_part_mhz", &StabilityReport::max_real_part_mhz)
        .def_readonly("stable", &StabilityReport::stable)
        .def_readonly("margin_mhz", &StabilityReport::margin_mhz)
        .def_readonly("regime", &StabilityReport::regime);

    m.def("classify_stability", &classify_stability, "chain"_a, "gain_mhz"_a, "pump"_a,
          "marginal_tol_mhz"_a = default_marginal_tol_mhz);

    py::class_<ClosedFormThresholds>(m, "ClosedFormThresholds")
        .def_readonly("min_stable_j2_mhz", &ClosedFormThresholds::min_stable_j2_mhz)
        .def_readonly("min_stable_j1_mhz", &ClosedFormThresholds::min_stable_j1_mhz)
        .def_readonly("sqrt_k1k2_mhz", &ClosedFormThresholds::sqrt_k1k2_mhz)
        .def_readonly("sqrt_k2k3_mhz", &ClosedFormThresholds::sqrt_k2k3_mhz);

    m.def("closed_form_thresholds", &closed_form_thresholds, "kappa1_mhz"_a, "kappa2_mhz"_a,
          "kappa3_mhz"_a, "j1_mhz"_a = py::none(), "j2_mhz"_a = py::none());

    py::class_<StabilityMapCell>(m, "StabilityMapCell")
        .def_readonly("j1_mhz", &StabilityMapCell::j1_mhz)
        .def_readonly("j2_mhz", &StabilityMapCell::j2_mhz)
        .def_readonly("max_re_lambda_mhz", &StabilityMapCell::max_re_lambda_mhz)
        .def_readonly("label", &StabilityMapCell::label)
        .def_readonly("stable", &StabilityMapCell::stable);

    py::class_<StabilityMap>(m, "StabilityMap")
        .def_readonly("j1_grid_mhz", &StabilityMap::j1_grid_mhz)
        .def_readonly("j2_grid_mhz", &StabilityMap::j2_grid_mhz)
        .def_readonly("cells", &StabilityMap::cells)
        .def_readonly("boundary", &StabilityMap::boundary);

    m.def(
        "stability_map",
        [](const ResonatorChain& chain, double gain, const std::vector<double>& j1_grid,
           const std::vector<double>& j2_grid, double marginal_tol) {
            return stability_map(chain, gain, j1_grid, j2_grid, marginal_tol);
        },
        "chain_template"_a, "gain_mhz"_a, "j1_grid_mhz"_a, "j2_grid_mhz"_a,
        "marginal_tol_mhz"_a = default_marginal_tol_mhz);
    m.def("marginal_j1", &marginal_j1, "kappa1_mhz"_a, "kappa2_mhz"_a, "kappa3_mhz"_a,
          "j2_mhz"_a, "bracket_lo_mhz"_a, "bracket_hi_mhz"_a, "tol_mhz"_a = 1e-4);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("parameter_name", &TuneResult::parameter_name)
        .def_readonly("value_mhz", &TuneResult::value_mhz)
        .def_readonly("residual", &TuneResult::residual)
        .def_readonly("iterations", &TuneResult::iterations)
        .def_readonly("saturated_gain_mhz", &TuneResult::saturated_gain_mhz);

    py::class_<SaturatedFixedPoint>(m, "SaturatedFixedPoint")
        .def_readonly("g2s_mhz", &SaturatedFixedPoint::g2s_mhz)
        .def_readonly("amplitudes", &SaturatedFixedPoint::amplitudes)
        .def_readonly("iterations", &SaturatedFixedPoint::iterations);

    m.def("saturated_fixed_point", &saturated_fixed_point, "chain"_a, "gain"_a, "pump"_a,
          "tol"_a = 1e-10);
    m.def(
        "find_transparency_j2",
        [](const ResonatorChain& chain, const py::object& gain, const PumpDrive& pump, double lo,
           double hi, double tol) {
            return find_transparency_j2(chain, to_gain(gain), pump, lo, hi, tol);
        },
        "chain"_a, "gain"_a, "pump"_a, "bracket_lo_mhz"_a, "bracket_hi_mhz"_a, "tol_mhz"_a);

    py::class_<TransmissionScanRow>(m, "TransmissionScanRow")
        .def_readonly("j2_mhz", &TransmissionScanRow::j2_mhz)
        .def_readonly("label", &TransmissionScanRow::label)
        .def_readonly("stable", &TransmissionScanRow::stable)
        .def_readonly("transmission_center", &TransmissionScanRow::transmission_center)
        .def_readonly("transmission_min", &TransmissionScanRow::transmission_min)
        .def_readonly("transmission_max", &TransmissionScanRow::transmission_max);

    m.def(
        "scan_transmission_vs_j2",
        [](const ResonatorChain& chain, const py::object& gain, const PumpDrive& pump,
           const std::vector<double>& grid, double half_window, int points) {
            return scan_transmission_vs_j2(chain, to_gain(gain), pump, grid, half_window, points);
        },
        "chain"_a, "gain"_a, "pump"_a, "j2_grid_mhz"_a, "x_half_window_mhz"_a,
        "window_points"_a = 201);

    py::class_<NoiseEstimate>(m, "NoiseEstimate")
        .def_readonly("per_mode", &NoiseEstimate::per_mode)
        .def_readonly("selected", &NoiseEstimate::selected)
        .def_readonly("g2s_mhz", &NoiseEstimate::g2s_mhz)
        .def_readonly("eigenvalues", &NoiseEstimate::eigenvalues);

    m.def("noise_photon_estimates", &noise_photon_estimates, "chain"_a, "g2s_mhz"_a,
          "gamma2_mhz"_a);
    m.def("noise_floor_power", &noise_floor_power, "wavelength_m"_a);

#ifdef CAVITYTRIO_VERSION
    m.attr("__version__") = CAVITYTRIO_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
