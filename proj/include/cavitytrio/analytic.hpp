#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavitytrio/model.hpp"

namespace cavitytrio {

/// Steady intracavity state of a driven chain in the frame rotating at the
/// pump frequency. susceptibility = sqrt(2 kappa_ex) A1 / eps_p (well
/// defined for eps_p = 0 through linearity); transmission = 1 - susceptibility.
struct SteadySolution {
    Eigen::VectorXcd amplitudes;           // A_1..A_N [sqrt(MHz)]
    std::complex<double> susceptibility{};  // eps_T, dimensionless
    std::complex<double> transmission{};    // t = 1 - eps_T
    double detuning_x_mhz = 0.0;            // omega_p - omega_1
};

/// Closed-form steady state of a three-resonator chain. `gain_mhz` is the
/// effective gain of the active resonator (ignored if the middle resonator
/// is passive, in which case its own damping rate applies with opposite
/// sign). Throws SingularDenominator at a pole of the linear response.
SteadySolution steady_state_exact(const ResonatorChain& chain, double gain_mhz,
                                  const PumpDrive& pump);

/// A1 of a chain with up to four resonators, evaluated as a nested
/// continued fraction from the far end of the chain inward. A vanishing
/// subfraction denominator directly below the J1^2 level yields A1 = 0
/// exactly (the transparency point); a vanishing outermost denominator is a
/// pole and throws SingularSubfraction.
std::complex<double> steady_state_continued_fraction(const ResonatorChain& chain,
                                                     double gain_mhz, const PumpDrive& pump);

/// eps_T(x) over a detuning grid for a chain with degenerate resonance
/// frequencies. Re eps_T is the absorptive response, Im eps_T the
/// dispersive one. Throws NonDegenerateFrequencies if the fast path does
/// not apply; evaluate steady_state_exact per point instead.
std::vector<std::complex<double>> susceptibility_spectrum(const ResonatorChain& chain,
                                                          double gain_mhz, double kappa_ex_mhz,
                                                          std::span<const double> x_grid_mhz);

/// Transmission amplitude t = 1 - eps_T; |t|^2 is the output/input power ratio.
std::complex<double> transmission(const SteadySolution& solution);

struct TransparencyPoint {
    double j2_mhz = 0.0;
    double omega_p_mhz = 0.0;
};

/// Coupling and pump frequency at which the intracavity field of the pumped
/// resonator vanishes, for arbitrary (omega2, omega3). Degenerate rates with
/// distinct frequencies have no finite solution (EqualRates); degenerate
/// rates with equal frequencies reduce to (kappa2, omega0) by continuity.
TransparencyPoint transparency_condition_general(double kappa2_mhz, double kappa3_mhz,
                                                 double omega2_mhz, double omega3_mhz);

/// Four-resonator transparency condition at degenerate frequencies:
/// J2 = sqrt(kappa2 (J3^2 + kappa3 kappa4) / kappa4), pumped at omega0.
TransparencyPoint transparency_condition_four(double kappa2_mhz, double kappa3_mhz,
                                              double kappa4_mhz, double j3_mhz,
                                              double omega0_mhz = 0.0);

/// Steady amplitudes sqrt(2 kappa_ex) eps_p (0, i/J1, -sqrt(kappa2/kappa3)/J1)
/// of the dark configuration. Preconditions (degenerate frequencies,
/// resonant pump, J2 = sqrt(kappa2 kappa3)) are checked to 1e-9 relative.
Eigen::Vector3cd dark_state(const ResonatorChain& chain, double gain_mhz, const PumpDrive& pump);

/// Coefficients of the dark and bright combinations of (a2, a3). The two
/// rows are not orthogonal for kappa2 != kappa3.
struct DarkBrightBasis {
    Eigen::Vector2cd dark_coeffs;    // (-i sqrt(kappa2), +sqrt(kappa3))
    Eigen::Vector2cd bright_coeffs;  // (-i sqrt(kappa2), -sqrt(kappa3))
};

DarkBrightBasis dark_bright_basis(double kappa2_mhz, double kappa3_mhz);

/// Slope K of Im eps_T at x = 0 under the transparency conditions:
/// K = 2 kappa_ex (kappa2 - kappa3) / (J1^2 kappa3) [1/MHz]. The group
/// delay at the window center is -K.
double imag_slope_at_resonance(double kappa_ex_mhz, double kappa2_mhz, double kappa3_mhz,
                               double j1_mhz);

/// Group delay tau = d arg(t) / d omega_p [us], central difference with the
/// given step, phase unwrapped across the stencil.
double group_delay(const ResonatorChain& chain, double gain_mhz, const PumpDrive& pump,
                   double d_omega_mhz);

struct TransparencyWindow {
    /// Measured window size: distance from the dip center to the half-depth
    /// crossing, averaged over both sides. Approaches J1^2/kappa1 for small J1.
    double fwhm_mhz = 0.0;
    double small_j1_estimate_mhz = 0.0;  // J1^2 / kappa1
};

/// Numeric window size of the Re eps_T dip around x = 0 (bisection on each
/// side). Throws NoDip when Re eps_T is not locally minimal at x = 0, as in
/// the kappa2 > kappa3 amplification regime.
TransparencyWindow fwhm_transparency_window(const ResonatorChain& chain, double gain_mhz,
                                            double kappa_ex_mhz);

struct CooperativityResult {
    double cooperativity = 0.0;  // C = J1^2 / (kappa1 kappa2)
    double transmission = 0.0;   // T = C^2 / (C+1)^2
};

/// Window-center transmission of two coupled passive resonators.
CooperativityResult cooperativity_transmission(double kappa1_mhz, double kappa2_mhz,
                                               double j1_mhz);

}  // namespace cavitytrio
