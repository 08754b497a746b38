#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavitytrio/model.hpp"
#include "cavitytrio/stability.hpp"

namespace cavitytrio {

struct TuneResult {
    std::string parameter_name;
    double value_mhz = 0.0;
    /// |A1| / (sqrt(2 kappa_ex) eps_p) at the solution.
    double residual = 0.0;
    int iterations = 0;
    double saturated_gain_mhz = 0.0;  // effective gain at the solution
};

struct SaturatedFixedPoint {
    double g2s_mhz = 0.0;  // gross saturated gain g2,s (effective gain is g2s - gamma2)
    Eigen::VectorXcd amplitudes;
    int iterations = 0;
};

/// Self-consistent saturated steady state: damped iteration of
/// g <- kappa20 / (1 + |a2|^2 / I_S) against the linear steady state at the
/// current effective gain. Requires the constant-gain system at
/// kappa20 - gamma2 to be stable; throws IterationDiverged when the scalar
/// map fails to settle (callers fall back to time integration).
SaturatedFixedPoint saturated_fixed_point(const ResonatorChain& chain, const SaturatingGain& gain,
                                          const PumpDrive& pump, double tol = 1e-10);

/// Coupling J2 at which the pumped resonator's field vanishes under the
/// configured gain model, located inside [bracket_lo, bracket_hi]. For
/// constant gain this is sqrt(kappa2 kappa3) analytically; for saturating
/// gain the saturated fixed point shifts the condition to
/// J2 = sqrt((g2s - gamma2) kappa3) and the root is found numerically.
TuneResult find_transparency_j2(const ResonatorChain& chain, const GainModel& gain,
                                const PumpDrive& pump, double bracket_lo_mhz,
                                double bracket_hi_mhz, double tol_mhz);

struct TransmissionScanRow {
    double j2_mhz = 0.0;
    Regime label = Regime::Stable;
    bool stable = false;
    std::optional<double> transmission_center;  // |t(x=0)|^2
    std::optional<double> transmission_min;     // min |t|^2 over the x window
    std::optional<double> transmission_max;     // max |t|^2 over the x window
};

/// |t|^2 across a J2 grid at the window center plus spectrum extrema over a
/// detuning window. Unstable grid points carry the label only.
std::vector<TransmissionScanRow> scan_transmission_vs_j2(const ResonatorChain& chain,
                                                         const GainModel& gain,
                                                         const PumpDrive& pump,
                                                         std::span<const double> j2_grid_mhz,
                                                         double x_half_window_mhz,
                                                         int window_points = 201);

}  // namespace cavitytrio
