// Acceptance suite: every release criterion in one binary, one line per
// criterion, nonzero exit when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cavitytrio/analytic.hpp"
#include "cavitytrio/dynamics.hpp"
#include "cavitytrio/model.hpp"
#include "cavitytrio/noise.hpp"
#include "cavitytrio/stability.hpp"
#include "cavitytrio/tuning.hpp"

using namespace cavitytrio;

namespace {

struct Criterion {
    int id;
    std::string name;
    double budget_ms;
    std::function<void()> body;
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& message) {
    if (!ok) throw Failure(message);
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

ResonatorChain trio(double kappa1, double gain, double kappa3, double j1, double j2) {
    ResonatorChain chain;
    chain.resonators = {{0.0, Role::Passive, kappa1, kappa1 / 2.0},
                        {0.0, Role::Active, gain, 0.0},
                        {0.0, Role::Passive, kappa3, 0.0}};
    chain.couplings_mhz = {j1, j2};
    chain.kappa_ex_mhz = kappa1 / 2.0;
    return chain;
}

const PumpDrive kUnitPump{0.0, 1.0};

void criterion_transparency_exactness() {
    const auto chain = trio(10.0, 0.2, 5.0, 2.0, 1.0);
    const double eps = 1e4;
    const auto sol = steady_state_exact(chain, 0.2, PumpDrive{0.0, eps});
    const double drive = std::sqrt(2.0 * chain.kappa_ex_mhz) * eps;
    expect(std::abs(sol.amplitudes[0]) < 1e-14 * drive,
           "|A1| = " + fmt(std::abs(sol.amplitudes[0])) + " vs bound " + fmt(1e-14 * drive));
    const double t_sq = std::norm(sol.transmission);
    expect(std::abs(t_sq - 1.0) <= 1e-12, "|t(0)|^2 = " + fmt(t_sq));
}

void criterion_oracle_equivalence() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> rate(0.2, 5.0);
    int accepted = 0;
    while (accepted < 50) {
        const double kappa1 = 2.0 * rate(rng);
        const double gain = 0.2 * rate(rng);
        const auto chain = trio(kappa1, gain, rate(rng), rate(rng), rate(rng));
        const auto report = classify_stability(chain, gain, kUnitPump);
        if (!report.stable || report.margin_mhz < 0.05) continue;
        ++accepted;

        const auto exact = steady_state_exact(chain, gain, kUnitPump);
        const auto cf_a1 = steady_state_continued_fraction(chain, gain, kUnitPump);
        const double scale = exact.amplitudes.cwiseAbs().maxCoeff();
        expect(std::abs(cf_a1 - exact.amplitudes[0]) <= 1e-8 * scale,
               "continued fraction deviates at draw " + std::to_string(accepted));

        EvolveControls controls;
        controls.rel_tol = 1e-10;
        const auto traj = evolve(chain, GainModel(ConstantGain{gain}), kUnitPump,
                                 25.0 / report.margin_mhz, controls);
        for (int k = 0; k < 3; ++k) {
            expect(std::abs(traj.amplitudes.back()[k] - exact.amplitudes[k]) <= 1e-8 * scale,
                   "ODE endpoint deviates in component " + std::to_string(k + 1) + " at draw " +
                       std::to_string(accepted));
        }
    }
}

void criterion_gain_saturation() {
    const auto chain = trio(10.0, 0.2, 5.0, 20.0, 1.0);
    const auto traj =
        evolve(chain, GainModel(SaturatingGain{0.2, 1e8, 0.0}), PumpDrive{0.0, 1e4}, 30.0);
    expect(traj.stabilized_at_us.has_value(), "trajectory did not stabilize");
    const double gain = traj.gain_trace_mhz.back();
    expect(std::abs(gain - 0.195) <= 0.005, "saturated gain = " + fmt(gain));
}

void criterion_dark_mode_depth() {
    const auto chain = trio(2.0, 1e-3, 1.0, 10.0, std::sqrt(1e-3));
    const auto traj =
        evolve(chain, GainModel(SaturatingGain{1e-3, 1e8, 0.0}), PumpDrive{0.0, 1e4}, 60.0);
    expect(traj.stabilized_at_us.has_value(), "trajectory did not stabilize");
    const double n1 = final_photon_numbers(traj)[0];
    expect(std::abs(n1 - 7.69e-6) <= 0.1 * 7.69e-6, "final photon number = " + fmt(n1));
}

void criterion_saturation_aware_tuning() {
    const auto chain = trio(2.0, 0.01, 1.0, 10.0, 0.1);
    const auto result = find_transparency_j2(chain, GainModel(SaturatingGain{0.01, 1e8, 0.0}),
                                             PumpDrive{0.0, 1e4}, 0.05, 0.2, 1e-8);
    expect(std::abs(result.value_mhz - 0.099) <= 0.001,
           "tuned J2 = " + fmt(result.value_mhz) + " MHz");
}

void criterion_stability_boundary() {
    const auto thresholds = closed_form_thresholds(20.0, 0.06, 6.0, 1.0, std::nullopt);
    expect(thresholds.min_stable_j2_mhz.has_value(), "no J2 threshold returned");
    expect(std::abs(*thresholds.min_stable_j2_mhz - 0.24495) <= 1e-4,
           "min stable J2 = " + fmt(*thresholds.min_stable_j2_mhz) + " MHz");
    const double boundary = *thresholds.min_stable_j2_mhz;
    const auto below = classify_stability(trio(20.0, 0.06, 6.0, 1.0, boundary - 0.01), 0.06,
                                          kUnitPump);
    const auto above = classify_stability(trio(20.0, 0.06, 6.0, 1.0, boundary + 0.01), 0.06,
                                          kUnitPump);
    expect(!below.stable && above.stable, "classification does not flip across the boundary");
}

void criterion_marginal_coupling() {
    const double j1 = marginal_j1(10.0, 1.0, 0.1, std::sqrt(0.1), 0.5, 10.0);
    expect(std::abs(j1 - 3.017) <= 0.03, "marginal J1 = " + fmt(j1) + " MHz");
}

void criterion_dispersion_delay() {
    const double kappa_ex = 10.0, gain = 0.01, kappa3 = 20.0, j1 = 0.01;
    const auto chain = trio(20.0, gain, kappa3, j1, std::sqrt(gain * kappa3));
    const double k_analytic = imag_slope_at_resonance(kappa_ex, gain, kappa3, j1);

    const double h = 1e-6 * (j1 * j1 / 20.0);
    const std::vector<double> stencil{-h, h};
    const auto eps = susceptibility_spectrum(chain, gain, kappa_ex, stencil);
    const double k_numeric = (eps[1].imag() - eps[0].imag()) / (2.0 * h);
    expect(std::abs(k_numeric - k_analytic) <= 1e-6 * std::abs(k_analytic),
           "finite-difference slope " + fmt(k_numeric) + " vs analytic " + fmt(k_analytic));

    const double tau_us = group_delay(chain, gain, kUnitPump, h);
    expect(std::abs(tau_us + k_analytic) <= 1e-4 * std::abs(k_analytic),
           "delay " + fmt(tau_us) + " vs -K " + fmt(-k_analytic));

    const double tau_s = tau_us * 1e-6;
    expect(tau_s >= 0.1 && tau_s <= 1.0, "delay = " + fmt(tau_s) + " s");

    const auto window = fwhm_transparency_window(chain, gain, kappa_ex);
    const double fwhm_hz = window.fwhm_mhz * 1e6;
    expect(fwhm_hz >= 1.0 && fwhm_hz <= 10.0, "window = " + fmt(fwhm_hz) + " Hz");
}

void criterion_amplification_crossover() {
    const auto chain = trio(20.0, 0.06, 6.0, 1.0, 0.6);
    const GainModel gain(ConstantGain{0.06});
    const std::vector<double> grid{0.3, 0.45, 0.6, 0.75, 0.9};
    const auto rows = scan_transmission_vs_j2(chain, gain, kUnitPump, grid, 1.0);
    for (const auto& row : rows) {
        expect(row.transmission_center.has_value(),
               "no transmission at J2 = " + fmt(row.j2_mhz));
        const double t_sq = *row.transmission_center;
        if (row.j2_mhz > 0.6) {
            expect(t_sq < 1.0, "expected |t|^2 < 1 at J2 = " + fmt(row.j2_mhz));
        } else if (row.j2_mhz == 0.6) {
            expect(std::abs(t_sq - 1.0) <= 1e-10, "|t(0)|^2 = " + fmt(t_sq) + " at the point");
        } else {
            expect(t_sq > 1.0, "expected |t|^2 > 1 at J2 = " + fmt(row.j2_mhz));
        }
    }
}

void criterion_noise_estimate() {
    const auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
    const auto estimate = noise_photon_estimates(chain, 5.195, 5.0);
    expect(std::abs(estimate.selected - 3.6e-2) <= 0.15 * 3.6e-2,
           "noise photons = " + fmt(estimate.selected));
    double largest = 0.0;
    for (Eigen::Index k = 0; k < estimate.eigenvalues.size(); ++k) {
        largest = std::max(largest, std::abs(estimate.eigenvalues[k]));
    }
    expect(std::abs(largest - 19.97) <= 0.01 * 19.97,
           "largest |lambda| = " + fmt(largest) + " MHz");
}

void criterion_power_conversion() {
    const double power = power_from_amplitude(1e4, 1550e-9);
    expect(std::abs(power - 12.8e-6) <= 0.01 * 12.8e-6, "P(1e4 sqrt(MHz)) = " + fmt(power));
    const double eps = pump_amplitude_from_power(12.8e-6, 1550e-9);
    expect(std::abs(eps - 1e4) <= 0.01 * 1e4, "eps(12.8 uW) = " + fmt(eps));
}

void criterion_property_suites() {
    std::mt19937_64 rng(7);
    const auto log_uniform = [&rng](double lo, double hi) {
        std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
        return std::exp(dist(rng));
    };

    // Dark-operator annihilation and the photon-ratio law at the
    // transparency point.
    for (int trial = 0; trial < 50; ++trial) {
        const double gain = log_uniform(1e-2, 1e2);
        const double kappa3 = log_uniform(1e-2, 1e2);
        const auto chain = trio(4.0, gain, kappa3, 1.7, std::sqrt(gain * kappa3));
        const auto sol = steady_state_exact(chain, gain, PumpDrive{0.0, 2.0});
        const auto basis = dark_bright_basis(gain, kappa3);
        const std::complex<double> overlap = basis.dark_coeffs[0] * sol.amplitudes[1] +
                                             basis.dark_coeffs[1] * sol.amplitudes[2];
        expect(std::abs(overlap) <= 1e-12 * std::abs(sol.amplitudes[1]),
               "dark operator does not annihilate the settled fields");
        const double ratio = std::norm(sol.amplitudes[1]) / std::norm(sol.amplitudes[2]);
        expect(std::abs(ratio - kappa3 / gain) <= 1e-12 * (kappa3 / gain),
               "photon ratio " + fmt(ratio) + " vs " + fmt(kappa3 / gain));
    }

    // Trace identity over random chains.
    std::uniform_real_distribution<double> rate(0.05, 20.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double kappa1 = 2.0 * rate(rng);
        const double gain = rate(rng);
        const double kappa3 = rate(rng);
        const auto chain = trio(kappa1, gain, kappa3, rate(rng), rate(rng));
        const auto report = classify_stability(chain, gain, kUnitPump);
        double sum = 0.0;
        for (Eigen::Index k = 0; k < 3; ++k) sum += report.eigenvalues[k].real();
        const double expected = -kappa1 + gain - kappa3;
        expect(std::abs(sum - expected) <= 1e-10 * std::max(1.0, std::abs(expected)),
               "trace identity violated");
    }

    // Spectral symmetry of the degenerate-frequency response.
    {
        const auto chain = trio(10.0, 0.2, 5.0, 2.0, 1.0);
        std::vector<double> grid, mirrored;
        for (int k = 1; k <= 50; ++k) {
            grid.push_back(0.04 * k);
            mirrored.push_back(-0.04 * k);
        }
        const auto plus = susceptibility_spectrum(chain, 0.2, 5.0, grid);
        const auto minus = susceptibility_spectrum(chain, 0.2, 5.0, mirrored);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            expect(std::abs(plus[i].real() - minus[i].real()) <= 1e-12,
                   "Re eps_T is not even in x");
            expect(std::abs(plus[i].imag() + minus[i].imag()) <= 1e-12,
                   "Im eps_T is not odd in x");
        }
    }

    // I_S -> infinity limit of the saturating trajectory.
    {
        const auto chain = trio(10.0, 0.2, 5.0, 20.0, 1.0);
        const PumpDrive pump{0.0, 1e4};
        const auto sat = evolve(chain, GainModel(SaturatingGain{0.2, 1e30, 0.0}), pump, 10.0);
        const auto constant = evolve(chain, GainModel(ConstantGain{0.2}), pump, 10.0);
        expect(sat.times_us.size() == constant.times_us.size(), "step sequences differ");
        for (std::size_t i = 0; i < sat.times_us.size(); ++i) {
            const double scale = constant.amplitudes[i].cwiseAbs().maxCoeff() + 1e-30;
            expect((sat.amplitudes[i] - constant.amplitudes[i]).cwiseAbs().maxCoeff() <=
                       1e-6 * scale,
                   "saturating trajectory deviates from the constant-gain limit");
        }
    }

    // eps_T is independent of the drive amplitude.
    for (int trial = 0; trial < 20; ++trial) {
        const auto chain = trio(20.0, 0.06, 6.0, 1.0, 0.45);
        const double x = -1.0 + 0.1 * trial;
        const auto weak = steady_state_exact(chain, 0.06, PumpDrive{x, 1.0});
        const auto strong = steady_state_exact(chain, 0.06, PumpDrive{x, 1000.0});
        expect(std::abs(weak.susceptibility - strong.susceptibility) <= 1e-12,
               "eps_T depends on the drive amplitude");
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "complete-transparency exactness", 1.0, criterion_transparency_exactness},
        {2, "closed form / continued fraction / ODE equivalence", 30000.0,
         criterion_oracle_equivalence},
        {3, "gain saturation settles at 0.195 MHz", 10000.0, criterion_gain_saturation},
        {4, "dark-mode depth 7.69e-6 photons", 10000.0, criterion_dark_mode_depth},
        {5, "saturation-aware tuning at 0.099 MHz", 30000.0, criterion_saturation_aware_tuning},
        {6, "stability boundary at 0.24495 MHz", 5000.0, criterion_stability_boundary},
        {7, "marginal coupling at 3.017 MHz", 5000.0, criterion_marginal_coupling},
        {8, "dispersion slope, delay and window scales", 5000.0, criterion_dispersion_delay},
        {9, "amplification crossover across the tuned coupling", 10000.0,
         criterion_amplification_crossover},
        {10, "gain-noise estimate at 3.6e-2 photons", 5000.0, criterion_noise_estimate},
        {11, "pump power conversion at 1550 nm", 1000.0, criterion_power_conversion},
        {12, "property suites", 60000.0, criterion_property_suites},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure_detail;
        try {
            criterion.body();
        } catch (const std::exception& err) {
            failure_detail = err.what();
        }
        const double elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        bool ok = failure_detail.empty();
        if (ok && elapsed_ms > criterion.budget_ms) {
            ok = false;
            failure_detail = "runtime " + fmt(elapsed_ms) + " ms exceeds the " +
                             fmt(criterion.budget_ms) + " ms budget";
        }
        std::printf("[%s] %2d  %-55s (%.2f ms)%s%s\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), elapsed_ms, ok ? "" : " -- ",
                    failure_detail.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
