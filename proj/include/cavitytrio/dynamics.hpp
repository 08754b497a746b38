#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cavitytrio/analytic.hpp"
#include "cavitytrio/model.hpp"

namespace cavitytrio {

struct EvolveControls {
    double rel_tol = 1e-9;
    /// Absolute tolerance scale: abs_tol = abs_tol_factor * sqrt(2 kappa_ex) * eps_p.
    double abs_tol_factor = 1e-12;
    double steady_tol = 1e-8;
    /// Detection window; default is 20 / min nonzero |Re lambda| of the
    /// constant-gain matrix.
    std::optional<double> steady_window_us{};
    /// Amplitude overflow guard, relative to the drive scale.
    double divergence_factor = 1e12;
    /// Recorded samples are thinned to stay below this bound.
    std::size_t max_samples = 200000;
    /// Initial amplitudes; vacuum when absent.
    std::optional<Eigen::VectorXcd> initial{};
};

/// Time series of the mean intracavity fields in the rotating frame,
/// together with the effective gain trace.
struct Trajectory {
    std::vector<double> times_us;
    std::vector<Eigen::VectorXcd> amplitudes;    // a(t) [sqrt(MHz)]
    std::vector<double> gain_trace_mhz;          // effective gain kappa2(t)
    std::optional<double> stabilized_at_us{};
    SteadySolution final;                        // snapshot of the last sample
    double drive_scale_sqrt_mhz = 0.0;           // sqrt(2 kappa_ex) * eps_p
    double gain_ceiling_mhz = 0.0;               // kappa2 resp. kappa20
    /// Absolute amplitude resolution of the integration,
    /// 10 * (rel_tol * max recorded amplitude + abs_tol). Componentwise
    /// variation below this floor cannot be resolved and counts as steady.
    double noise_floor_sqrt_mhz = 0.0;
};

/// Integrates da/dt = M(g(t)) a + v_in in the rotating frame with an
/// embedded Dormand-Prince 5(4) pair; v_in = (sqrt(2 kappa_ex) eps_p, 0, ...).
/// Under saturating gain, g follows |a2|^2 instantaneously (mean-field
/// closure). Throws Diverged when any amplitude exceeds the overflow guard
/// and ToleranceNotMet when step control fails.
Trajectory evolve(const ResonatorChain& chain, const GainModel& gain, const PumpDrive& pump,
                  double t_end_us, const EvolveControls& controls = {});

/// Earliest time from which all recorded samples within [t, t + window]
/// agree componentwise to steady_tol (relative, with a drive-scaled floor)
/// and the gain trace is flat to steady_tol * gain ceiling. Absent when the
/// trajectory never settles within the recorded span.
std::optional<double> detect_steady(const Trajectory& trajectory, double window_us,
                                    double steady_tol);

/// |a_k|^2 of the stabilized endpoint, in photons. Throws NotStabilized if
/// the trajectory has no detected steady time.
Eigen::VectorXd final_photon_numbers(const Trajectory& trajectory);

}  // namespace cavitytrio
