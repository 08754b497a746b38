#include "cavitytrio/tuning.hpp"

#include <cmath>

#include "cavitytrio/analytic.hpp"
#include "cavitytrio/dynamics.hpp"
#include "cavitytrio/parallel.hpp"

namespace cavitytrio {

namespace {

/// Linear steady state at a fixed effective gain, by direct solve of
/// -M a = v_in. Valid for any chain length.
Eigen::VectorXcd linear_steady_state(const ResonatorChain& chain, double gain_mhz,
                                     const PumpDrive& pump) {
    const Eigen::MatrixXcd m = dynamical_matrix(chain, gain_mhz, pump.omega_p_mhz);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m.rows());
    v[0] = std::sqrt(2.0 * chain.kappa_ex_mhz) * pump.amplitude_sqrt_mhz;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(-m).solve(v);
}

void require_resonant_degenerate(const ResonatorChain& chain, const PumpDrive& pump) {
    if (!chain.degenerate_frequencies()) {
        fail(Errc::ConditionsNotMet, "chain frequencies must be degenerate");
    }
    const double omega0 = chain.omega_ref_mhz();
    if (std::abs(pump.omega_p_mhz - omega0) > 1e-9 * std::max(1.0, std::abs(omega0))) {
        fail(Errc::ConditionsNotMet, "pump must be resonant with the common frequency");
    }
}

struct SaturatedState {
    double effective_gain = 0.0;  // g2s - gamma2
    double g2s = 0.0;
    Eigen::VectorXcd amplitudes;
    int iterations = 0;
};

/// Saturated state for a candidate chain; falls back to time integration
/// when the fixed-point map cycles.
SaturatedState saturated_state(const ResonatorChain& chain, const SaturatingGain& gain,
                               const PumpDrive& pump, double tol) {
    try {
        const auto fp = saturated_fixed_point(chain, gain, pump, tol);
        return {fp.g2s_mhz - gain.gamma2_mhz, fp.g2s_mhz, fp.amplitudes, fp.iterations};
    } catch (const Error& err) {
        if (err.code() != Errc::IterationDiverged) throw;
    }
    EvolveControls controls;
    controls.rel_tol = 1e-10;
    const double window = 40.0;
    const auto lam = eigenvalues(
        dynamical_matrix(chain, gain.kappa20_mhz - gain.gamma2_mhz, pump.omega_p_mhz));
    double min_re = 1.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        const double re = std::abs(lam[k].real());
        if (re > 1e-12) min_re = std::min(min_re, re);
    }
    const auto traj = evolve(chain, GainModel(gain), pump, window / min_re, controls);
    const double g_eff = traj.gain_trace_mhz.back();
    return {g_eff, g_eff + gain.gamma2_mhz, traj.amplitudes.back(), 0};
}

}  // namespace

SaturatedFixedPoint saturated_fixed_point(const ResonatorChain& chain, const SaturatingGain& gain,
                                          const PumpDrive& pump, double tol) {
    require_valid(chain);
    validate_gain(GainModel(gain));
    const auto active = chain.active_index();
    if (!active) fail(Errc::MissingActive, "saturating gain requires an active resonator");

    const double unsaturated = gain.kappa20_mhz - gain.gamma2_mhz;
    const auto precheck = classify_stability(chain, unsaturated, pump);
    if (!precheck.stable) {
        fail(Errc::UnstableRegion,
             "constant-gain system at kappa20 - gamma2 is unstable; saturation dynamics do not "
             "admit this fixed point");
    }

    const auto a_idx = static_cast<Eigen::Index>(*active);
    double g = gain.kappa20_mhz;  // gross gain iterate
    Eigen::VectorXcd amps;
    constexpr int kMaxIterations = 500;
    for (int it = 1; it <= kMaxIterations; ++it) {
        amps = linear_steady_state(chain, g - gain.gamma2_mhz, pump);
        if (!amps.allFinite()) fail(Errc::IterationDiverged, "singular linear solve");
        const double n2 = std::norm(amps[a_idx]);
        const double g_mapped = gain.kappa20_mhz / (1.0 + n2 / gain.saturation_intensity);
        const double g_next = g + 0.5 * (g_mapped - g);
        const bool converged = std::abs(g_next - g) <= tol * gain.kappa20_mhz;
        g = g_next;
        if (converged) {
            amps = linear_steady_state(chain, g - gain.gamma2_mhz, pump);
            return {g, amps, it};
        }
    }
    fail(Errc::IterationDiverged, "fixed-point iteration did not settle");
}

TuneResult find_transparency_j2(const ResonatorChain& chain, const GainModel& gain,
                                const PumpDrive& pump, double bracket_lo_mhz,
                                double bracket_hi_mhz, double tol_mhz) {
    require_valid(chain);
    validate_gain(gain);
    if (chain.size() != 3) {
        fail(Errc::InvalidArgument, "J2 tuning requires a 3-resonator chain");
    }
    if (!(bracket_lo_mhz > 0.0) || !(bracket_hi_mhz > bracket_lo_mhz)) {
        fail(Errc::InvalidArgument, "bracket must satisfy 0 < lo < hi");
    }
    require_resonant_degenerate(chain, pump);
    if (!chain.active_index()) {
        fail(Errc::MissingActive, "transparency tuning requires an active resonator");
    }
    const double kappa3 = chain.resonators[2].rate_mhz;
    const double drive = std::sqrt(2.0 * chain.kappa_ex_mhz) *
                         (pump.amplitude_sqrt_mhz > 0.0 ? pump.amplitude_sqrt_mhz : 1.0);

    const auto with_j2 = [&](double j2) {
        ResonatorChain c = chain;
        c.couplings_mhz[1] = j2;
        return c;
    };
    // |A1| / (sqrt(2 kappa_ex) eps_p), which at unit drive is |A1| / sqrt(2 kappa_ex).
    const auto normalized_a1 = [&](const ResonatorChain& c, double effective_gain_mhz) {
        PumpDrive unit = pump;
        unit.amplitude_sqrt_mhz = 1.0;
        const auto a1 = steady_state_continued_fraction(c, effective_gain_mhz, unit);
        return std::abs(a1) / std::sqrt(2.0 * chain.kappa_ex_mhz);
    };

    if (const auto* constant = std::get_if<ConstantGain>(&gain)) {
        if (!(constant->kappa2_mhz > 0.0)) {
            fail(Errc::ConditionsNotMet, "constant effective gain must be positive");
        }
        const double j2_star = std::sqrt(constant->kappa2_mhz * kappa3);
        if (j2_star < bracket_lo_mhz || j2_star > bracket_hi_mhz) {
            fail(Errc::BracketExcluded, "sqrt(kappa2 kappa3) lies outside the bracket");
        }
        TuneResult out;
        out.parameter_name = "j2";
        out.value_mhz = j2_star;
        out.residual = normalized_a1(with_j2(j2_star), constant->kappa2_mhz);
        out.iterations = 0;
        out.saturated_gain_mhz = constant->kappa2_mhz;
        return out;
    }

    const auto& saturating = std::get<SaturatingGain>(gain);

    // Signed transparency mismatch at resonance: the subfraction below J1^2
    // is real there and vanishes exactly at the tuned coupling. It is
    // monotone in J2, so bracketed bisection suffices.
    int iterations = 0;
    const auto mismatch = [&](double j2) {
        const ResonatorChain c = with_j2(j2);
        const auto report = classify_stability(c, saturating.kappa20_mhz - saturating.gamma2_mhz,
                                               pump);
        if (!report.stable) {
            fail(Errc::UnstableRegion, "candidate J2 = " + std::to_string(j2) +
                                           " MHz is outside the stable region");
        }
        ++iterations;
        const auto state = saturated_state(c, saturating, pump, 1e-12);
        return state.effective_gain - j2 * j2 / kappa3;
    };

    double lo = bracket_lo_mhz;
    double hi = bracket_hi_mhz;
    double f_lo = mismatch(lo);
    const double f_hi = mismatch(hi);
    if (f_lo != 0.0 && f_hi != 0.0 && (f_lo > 0.0) == (f_hi > 0.0)) {
        fail(Errc::BracketExcluded, "no transparency point inside the bracket");
    }
    if (f_lo == 0.0) hi = lo;
    if (f_hi == 0.0) lo = hi;
    while (hi - lo > tol_mhz && iterations < 300) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = mismatch(mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    const double j2_star = 0.5 * (lo + hi);
    const auto solution = saturated_state(with_j2(j2_star), saturating, pump, 1e-12);

    TuneResult out;
    out.parameter_name = "j2";
    out.value_mhz = j2_star;
    out.residual = pump.amplitude_sqrt_mhz > 0.0
                       ? std::abs(solution.amplitudes[0]) / drive
                       : normalized_a1(with_j2(j2_star), solution.effective_gain);
    out.iterations = iterations;
    out.saturated_gain_mhz = solution.effective_gain;
    return out;
}

std::vector<TransmissionScanRow> scan_transmission_vs_j2(const ResonatorChain& chain,
                                                         const GainModel& gain,
                                                         const PumpDrive& pump,
                                                         std::span<const double> j2_grid_mhz,
                                                         double x_half_window_mhz,
                                                         int window_points) {
    require_valid(chain);
    validate_gain(gain);
    if (chain.size() != 3) {
        fail(Errc::InvalidArgument, "J2 scan requires a 3-resonator chain");
    }
    if (!(x_half_window_mhz > 0.0) || window_points < 3) {
        fail(Errc::InvalidArgument, "window must be positive with at least 3 points");
    }
    for (double j2 : j2_grid_mhz) {
        if (!(j2 > 0.0)) fail(Errc::InvalidArgument, "J2 grid must be positive");
    }

    std::vector<TransmissionScanRow> rows(j2_grid_mhz.size());
    parallel::parallel_for(j2_grid_mhz.size(), [&](std::size_t idx) {
        const double j2 = j2_grid_mhz[idx];
        ResonatorChain c = chain;
        c.couplings_mhz[1] = j2;
        TransmissionScanRow row;
        row.j2_mhz = j2;
        const double precheck_gain = unsaturated_effective_gain(gain);
        const auto report = classify_stability(c, precheck_gain, pump);
        row.label = report.regime;
        row.stable = report.stable;
        if (report.stable) {
            double g_eff = precheck_gain;
            if (const auto* sat = std::get_if<SaturatingGain>(&gain)) {
                g_eff = saturated_state(c, *sat, pump, 1e-12).effective_gain;
            }
            PumpDrive unit = pump;
            unit.amplitude_sqrt_mhz = 1.0;
            const double root = std::sqrt(2.0 * c.kappa_ex_mhz);
            const auto t_sq_at = [&](double x) {
                PumpDrive shifted = unit;
                shifted.omega_p_mhz = pump.omega_p_mhz + x;
                const auto a1 = steady_state_continued_fraction(c, g_eff, shifted);
                return std::norm(1.0 - root * a1);
            };
            row.transmission_center = t_sq_at(0.0);
            double t_min = *row.transmission_center;
            double t_max = t_min;
            for (int p = 0; p < window_points; ++p) {
                const double x = -x_half_window_mhz +
                                 2.0 * x_half_window_mhz * p / (window_points - 1);
                const double value = t_sq_at(x);
                t_min = std::min(t_min, value);
                t_max = std::max(t_max, value);
            }
            row.transmission_min = t_min;
            row.transmission_max = t_max;
        }
        rows[idx] = std::move(row);
    });
    return rows;
}

}  // namespace cavitytrio
