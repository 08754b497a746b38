#include "cavitytrio/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "cavitytrio/stability.hpp"

namespace cavitytrio {

namespace {

using Vec = Eigen::VectorXcd;

/// Right-hand side of the coupled-mode equations. The matrix action is
/// tridiagonal; only the active diagonal entry depends on the state.
struct ChainRhs {
    std::vector<std::complex<double>> diag;  // passive diagonal entries (rotating frame)
    std::vector<double> couplings;
    std::optional<std::size_t> active;
    double active_detuning = 0.0;
    const GainModel* gain = nullptr;
    std::complex<double> drive{};

    double effective_gain_at(const Vec& y) const {
        if (!active) return 0.0;
        return effective_gain(*gain, std::norm(y[static_cast<Eigen::Index>(*active)]));
    }

    void operator()(const Vec& y, Vec& dy) const {
        const auto n = y.size();
        const double g = effective_gain_at(y);
        for (Eigen::Index k = 0; k < n; ++k) {
            std::complex<double> d = diag[static_cast<std::size_t>(k)];
            if (active && static_cast<Eigen::Index>(*active) == k) {
                d = std::complex<double>(g, active_detuning);
            }
            dy[k] = d * y[k];
            if (k > 0) dy[k] += std::complex<double>(0.0, couplings[static_cast<std::size_t>(k - 1)]) * y[k - 1];
            if (k + 1 < n) dy[k] += std::complex<double>(0.0, couplings[static_cast<std::size_t>(k)]) * y[k + 1];
        }
        dy[0] += drive;
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,       0.0, 500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Recorder {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<double> gains;
    std::size_t max_samples;
    std::size_t stride = 1;
    std::size_t step_count = 0;

    explicit Recorder(std::size_t cap) : max_samples(std::max<std::size_t>(cap, 16)) {}

    void push(double t, const Vec& y, double g, bool force) {
        if (!force && (step_count++ % stride) != 0) return;
        times.push_back(t);
        states.push_back(y);
        gains.push_back(g);
        if (times.size() >= max_samples) compact();
    }

    void compact() {
        std::size_t w = 0;
        for (std::size_t r = 0; r < times.size(); r += 2, ++w) {
            times[w] = times[r];
            states[w] = states[r];
            gains[w] = gains[r];
        }
        times.resize(w);
        states.resize(w);
        gains.resize(w);
        stride *= 2;
    }

    void push_final(double t, const Vec& y, double g) {
        if (!times.empty() && times.back() == t) {
            states.back() = y;
            gains.back() = g;
            return;
        }
        times.push_back(t);
        states.push_back(y);
        gains.push_back(g);
    }
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double abs_tol, double rel_tol) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < err.size(); ++k) {
        const double scale = abs_tol + rel_tol * std::max(std::abs(y0[k]), std::abs(y1[k]));
        const double e = std::abs(err[k]);
        if (e == 0.0) continue;
        if (scale == 0.0) return std::numeric_limits<double>::infinity();
        const double ratio = e / scale;
        sum += ratio * ratio;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

double default_steady_window(const ResonatorChain& chain, const GainModel& gain,
                             const PumpDrive& pump) {
    const double g = unsaturated_effective_gain(gain);
    const auto lambda = eigenvalues(dynamical_matrix(chain, g, pump.omega_p_mhz));
    double min_re = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        const double re = std::abs(lambda[k].real());
        if (re > 1e-12 && re < min_re) min_re = re;
    }
    if (!std::isfinite(min_re)) min_re = 1.0;
    return 20.0 / min_re;
}

}  // namespace

Trajectory evolve(const ResonatorChain& chain, const GainModel& gain, const PumpDrive& pump,
                  double t_end_us, const EvolveControls& controls) {
    require_valid(chain);
    validate_gain(gain);
    if (t_end_us < 0.0 || !std::isfinite(t_end_us)) {
        fail(Errc::InvalidArgument, "t_end must be >= 0");
    }
    const auto n = static_cast<Eigen::Index>(chain.size());
    const auto active = chain.active_index();
    if (!active && std::holds_alternative<SaturatingGain>(gain)) {
        fail(Errc::MissingActive, "saturating gain requires an active resonator");
    }

    ChainRhs rhs;
    rhs.couplings = chain.couplings_mhz;
    rhs.active = active;
    rhs.gain = &gain;
    rhs.diag.resize(chain.size());
    double rate_scale = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const double det = pump.omega_p_mhz - chain.resonators[k].omega_mhz;
        rhs.diag[k] = std::complex<double>(-chain.resonators[k].rate_mhz, det);
        rate_scale = std::max({rate_scale, chain.resonators[k].rate_mhz, std::abs(det)});
    }
    for (double j : chain.couplings_mhz) rate_scale = std::max(rate_scale, j);
    rate_scale = std::max(rate_scale, std::abs(gain_ceiling_mhz(gain)));
    if (active) {
        rhs.active_detuning = pump.omega_p_mhz - chain.resonators[*active].omega_mhz;
    }
    const double drive_scale = std::sqrt(2.0 * chain.kappa_ex_mhz) * pump.amplitude_sqrt_mhz;
    rhs.drive = drive_scale;

    Vec y = Vec::Zero(n);
    if (controls.initial) {
        if (controls.initial->size() != n) {
            fail(Errc::InvalidArgument, "initial state size does not match the chain");
        }
        y = *controls.initial;
    }
    const double initial_norm = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
    const double guard =
        controls.divergence_factor * std::max({drive_scale, initial_norm, 1e-300});
    const double abs_tol = controls.abs_tol_factor * std::max({drive_scale, initial_norm, 1.0});

    Recorder rec(controls.max_samples);
    rec.push(0.0, y, rhs.effective_gain_at(y), true);

    if (t_end_us > 0.0) {
        Vec k_stage[7];
        for (auto& stage : k_stage) stage.resize(n);
        Vec y_trial(n), y_err(n), y_stage(n);

        double t = 0.0;
        double h = std::min(t_end_us, 1e-2 / (1.0 + rate_scale));
        const double h_min = std::max(1e-14 * t_end_us, 1e-300);
        bool last_rejected = false;
        std::size_t step_evals = 0;
        constexpr std::size_t kMaxSteps = 50'000'000;

        rhs(y, k_stage[0]);  // FSAL
        while (t < t_end_us) {
            if (++step_evals > kMaxSteps) {
                fail(Errc::ToleranceNotMet, "step limit exceeded");
            }
            h = std::min(h, t_end_us - t);
            for (int s = 1; s < 7; ++s) {
                y_stage = y;
                for (int q = 0; q < s; ++q) {
                    if (kA[s][q] != 0.0) y_stage += (h * kA[s][q]) * k_stage[q];
                }
                rhs(y_stage, k_stage[s]);
            }
            y_trial = y;
            y_err.setZero();
            for (int s = 0; s < 7; ++s) {
                if (kB5[s] != 0.0) y_trial += (h * kB5[s]) * k_stage[s];
                const double db = kB5[s] - kB4[s];
                if (db != 0.0) y_err += (h * db) * k_stage[s];
            }
            const double err = error_norm(y_err, y, y_trial, abs_tol, controls.rel_tol);
            if (err <= 1.0) {
                t += h;
                y.swap(y_trial);
                k_stage[0] = k_stage[6];  // FSAL: stage 7 equals f(t+h, y_new)
                const double g_now = rhs.effective_gain_at(y);
                if (y.cwiseAbs().maxCoeff() > guard) {
                    fail(Errc::Diverged,
                         "amplitude exceeded the overflow guard; the configured gain is "
                         "dynamically unstable");
                }
                rec.push(t, y, g_now, t >= t_end_us);
                const double grow = last_rejected ? 1.0 : 5.0;
                h *= std::min(grow, std::max(0.2, 0.9 * std::pow(err > 0 ? err : 1e-16, -0.2)));
                last_rejected = false;
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                last_rejected = true;
                if (h < h_min) {
                    fail(Errc::ToleranceNotMet, "step size underflow at t = " + std::to_string(t));
                }
            }
        }
        rec.push_final(t_end_us, y, rhs.effective_gain_at(y));
    }

    Trajectory traj;
    traj.times_us = std::move(rec.times);
    traj.amplitudes = std::move(rec.states);
    traj.gain_trace_mhz = std::move(rec.gains);
    traj.drive_scale_sqrt_mhz = drive_scale;
    traj.gain_ceiling_mhz = gain_ceiling_mhz(gain);
    double max_amp = 0.0;
    for (const auto& a : traj.amplitudes) {
        if (a.size()) max_amp = std::max(max_amp, a.cwiseAbs().maxCoeff());
    }
    traj.noise_floor_sqrt_mhz = 10.0 * (controls.rel_tol * max_amp + abs_tol);

    traj.final.amplitudes = traj.amplitudes.back();
    traj.final.detuning_x_mhz = pump.omega_p_mhz - chain.omega_ref_mhz();
    if (pump.amplitude_sqrt_mhz > 0.0) {
        traj.final.susceptibility = std::sqrt(2.0 * chain.kappa_ex_mhz) *
                                    traj.final.amplitudes[0] / pump.amplitude_sqrt_mhz;
    }
    traj.final.transmission = 1.0 - traj.final.susceptibility;

    double window = controls.steady_window_us.value_or(0.0);
    if (window <= 0.0) window = default_steady_window(chain, gain, pump);
    traj.stabilized_at_us = detect_steady(traj, window, controls.steady_tol);
    return traj;
}

std::optional<double> detect_steady(const Trajectory& trajectory, double window_us,
                                    double steady_tol) {
    const auto& times = trajectory.times_us;
    const std::size_t n = times.size();
    if (n == 0) return std::nullopt;
    const std::size_t modes = static_cast<std::size_t>(trajectory.amplitudes.front().size());
    const double eps0 = 1e-9 * trajectory.drive_scale_sqrt_mhz;
    const double gain_tol = steady_tol * std::max(trajectory.gain_ceiling_mhz, 0.0);

    // Sliding-window min/max via monotonic index deques, one pair per channel:
    // Re and Im of each mode, |a| per mode, and the gain trace.
    struct MinMax {
        std::deque<std::size_t> min_q, max_q;
        void push(std::size_t i, double v, const std::vector<double>& vals) {
            while (!min_q.empty() && vals[min_q.back()] >= v) min_q.pop_back();
            min_q.push_back(i);
            while (!max_q.empty() && vals[max_q.back()] <= v) max_q.pop_back();
            max_q.push_back(i);
        }
        void drop_before(std::size_t i) {
            while (!min_q.empty() && min_q.front() < i) min_q.pop_front();
            while (!max_q.empty() && max_q.front() < i) max_q.pop_front();
        }
    };

    std::vector<std::vector<double>> re(modes, std::vector<double>(n));
    std::vector<std::vector<double>> im(modes, std::vector<double>(n));
    std::vector<std::vector<double>> mag(modes, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < modes; ++k) {
            const auto a = trajectory.amplitudes[i][static_cast<Eigen::Index>(k)];
            re[k][i] = a.real();
            im[k][i] = a.imag();
            mag[k][i] = std::abs(a);
        }
    }

    std::vector<MinMax> mm_re(modes), mm_im(modes), mm_mag(modes);
    MinMax mm_gain;
    const double t_last = times.back();
    const double slack = 1e-12 * std::max(1.0, std::abs(t_last));

    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_hi = times[i] + window_us;
        if (t_hi > t_last + slack) break;  // window no longer fits in the data
        while (j < n && times[j] <= t_hi + slack) {
            for (std::size_t k = 0; k < modes; ++k) {
                mm_re[k].push(j, re[k][j], re[k]);
                mm_im[k].push(j, im[k][j], im[k]);
                mm_mag[k].push(j, mag[k][j], mag[k]);
            }
            mm_gain.push(j, trajectory.gain_trace_mhz[j], trajectory.gain_trace_mhz);
            ++j;
        }
        for (std::size_t k = 0; k < modes; ++k) {
            mm_re[k].drop_before(i);
            mm_im[k].drop_before(i);
            mm_mag[k].drop_before(i);
        }
        mm_gain.drop_before(i);

        bool ok = true;
        for (std::size_t k = 0; k < modes && ok; ++k) {
            const double d_re = re[k][mm_re[k].max_q.front()] - re[k][mm_re[k].min_q.front()];
            const double d_im = im[k][mm_im[k].max_q.front()] - im[k][mm_im[k].min_q.front()];
            const double diam = std::hypot(d_re, d_im);
            if (diam == 0.0) continue;
            if (diam < trajectory.noise_floor_sqrt_mhz) continue;  // below resolution
            const double denom = mag[k][mm_mag[k].min_q.front()] + eps0;
            if (denom == 0.0 || diam / denom >= steady_tol) ok = false;
        }
        if (ok) {
            const double d_gain = trajectory.gain_trace_mhz[mm_gain.max_q.front()] -
                                  trajectory.gain_trace_mhz[mm_gain.min_q.front()];
            if (d_gain != 0.0 && d_gain >= gain_tol) ok = false;
        }
        if (ok) return times[i];
    }
    return std::nullopt;
}

Eigen::VectorXd final_photon_numbers(const Trajectory& trajectory) {
    if (!trajectory.stabilized_at_us) {
        fail(Errc::NotStabilized, "trajectory has no detected steady time");
    }
    const auto& a = trajectory.amplitudes.back();
    Eigen::VectorXd photons(a.size());
    for (Eigen::Index k = 0; k < a.size(); ++k) photons[k] = std::norm(a[k]);
    return photons;
}

}  // namespace cavitytrio
