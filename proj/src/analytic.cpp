#include "cavitytrio/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "cavitytrio/constants.hpp"

namespace cavitytrio {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double sqrt_two_kex(const ResonatorChain& chain) {
    return std::sqrt(2.0 * chain.kappa_ex_mhz);
}

/// (a - sqrt(b))(a + sqrt(b)) for b > 0. Equals a^2 - b, but cancels exactly
/// when a was itself computed as sqrt(b), which is how tuned couplings reach
/// the transparency point.
double difference_of_squares(double a, double b) {
    const double root = std::sqrt(b);
    return (a - root) * (a + root);
}

struct Denominator {
    std::complex<double> value{};
    bool infinite = false;
};

/// Response denominator D1 of the continued fraction, evaluated from the far
/// end of the chain inward: D_N = -s_N - i d_N, D_k = -s_k - i d_k + J_k^2 / D_{k+1}.
/// A zero level propagates as an infinite next level (whose J^2/D term then
/// vanishes), which is the projective limit of the fraction.
Denominator response_denominator(const std::vector<double>& s, const std::vector<double>& js,
                                 const std::vector<double>& det) {
    const std::size_t n = s.size();
    Denominator d{std::complex<double>(-s[n - 1], -det[n - 1]), false};
    for (std::size_t k = n - 1; k-- > 0;) {
        const std::complex<double> base(-s[k], -det[k]);
        const double j = js[k];
        if (d.infinite) {
            d = {base, false};
            continue;
        }
        if (d.value == 0.0) {
            d = {{}, true};
            continue;
        }
        if (det[k] == 0.0 && d.value.imag() == 0.0 && s[k] * d.value.real() > 0.0) {
            // Resonant level over a real sub-denominator: factor so that a
            // coupling tuned to sqrt(s * D_next) cancels exactly.
            const double r = d.value.real();
            d = {std::complex<double>(difference_of_squares(j, s[k] * r) / r, 0.0), false};
        } else {
            d = {base + j * j / d.value, false};
        }
    }
    return d;
}

std::vector<double> detunings(const ResonatorChain& chain, double omega_p_mhz) {
    std::vector<double> det(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        det[k] = omega_p_mhz - chain.resonators[k].omega_mhz;
    }
    return det;
}

void require_degenerate(const ResonatorChain& chain) {
    if (!chain.degenerate_frequencies()) {
        fail(Errc::NonDegenerateFrequencies,
             "resonance frequencies differ; evaluate steady_state_exact per point");
    }
}

/// eps_T at detuning x for a degenerate-frequency chain.
std::complex<double> susceptibility_at(const ResonatorChain& chain, const std::vector<double>& s,
                                       double kappa_ex_mhz, double x_mhz) {
    std::vector<double> det(chain.size(), x_mhz);
    const auto d = response_denominator(s, chain.couplings_mhz, det);
    if (d.infinite) return {0.0, 0.0};
    if (d.value == 0.0) {
        fail(Errc::SingularSubfraction, "response pole at x = " + std::to_string(x_mhz) + " MHz");
    }
    return 2.0 * kappa_ex_mhz / d.value;
}

}  // namespace

SteadySolution steady_state_exact(const ResonatorChain& chain, double gain_mhz,
                                  const PumpDrive& pump) {
    require_valid(chain);
    if (chain.size() != 3) {
        fail(Errc::InvalidArgument, "closed-form steady state requires a 3-resonator chain");
    }
    const auto s = signed_rates(chain, gain_mhz);
    const auto det = detunings(chain, pump.omega_p_mhz);
    const double j1 = chain.couplings_mhz[0];
    const double j2 = chain.couplings_mhz[1];
    const double k1 = chain.resonators[0].rate_mhz;
    const double k3 = chain.resonators[2].rate_mhz;

    const std::complex<double> p1(k1, -det[0]);     // kappa1 - i d1
    const std::complex<double> p2(s[1], det[1]);    // kappa2 + i d2 (signed)
    const std::complex<double> p3(k3, -det[2]);     // kappa3 - i d3

    const std::complex<double> eta = j2 * j2 * p1;
    const std::complex<double> denom = eta + (j1 * j1 - p1 * p2) * p3;
    if (denom == 0.0) {
        fail(Errc::SingularDenominator, "pole of the linear response; no bounded steady state");
    }

    std::complex<double> num1;
    if (det[1] == 0.0 && det[2] == 0.0 && s[1] * k3 > 0.0) {
        num1 = difference_of_squares(j2, s[1] * k3);
    } else {
        num1 = j2 * j2 - p2 * p3;
    }

    const double root = sqrt_two_kex(chain);
    // Unit-drive solution; amplitudes scale linearly with eps_p.
    const std::complex<double> u1 = root * num1 / denom;
    const std::complex<double> u2 = root * j1 * std::complex<double>(det[2], k3) / denom;
    const std::complex<double> u3 = -root * j1 * j2 / denom;

    SteadySolution out;
    out.amplitudes = Eigen::Vector3cd(u1, u2, u3) * pump.amplitude_sqrt_mhz;
    out.susceptibility = root * u1;
    out.transmission = 1.0 - out.susceptibility;
    out.detuning_x_mhz = pump.omega_p_mhz - chain.omega_ref_mhz();
    return out;
}

std::complex<double> steady_state_continued_fraction(const ResonatorChain& chain, double gain_mhz,
                                                     const PumpDrive& pump) {
    require_valid(chain);
    if (chain.size() > 4) {
        fail(Errc::InvalidArgument, "continued-fraction form is provided for up to 4 resonators");
    }
    const auto s = signed_rates(chain, gain_mhz);
    const auto det = detunings(chain, pump.omega_p_mhz);
    const auto d = response_denominator(s, chain.couplings_mhz, det);
    if (d.infinite) return {0.0, 0.0};
    if (d.value == 0.0) {
        fail(Errc::SingularSubfraction, "outermost denominator vanishes; response is unbounded");
    }
    return sqrt_two_kex(chain) * pump.amplitude_sqrt_mhz / d.value;
}

std::vector<std::complex<double>> susceptibility_spectrum(const ResonatorChain& chain,
                                                          double gain_mhz, double kappa_ex_mhz,
                                                          std::span<const double> x_grid_mhz) {
    require_valid(chain);
    require_degenerate(chain);
    const auto s = signed_rates(chain, gain_mhz);
    std::vector<std::complex<double>> out(x_grid_mhz.size());
    for (std::size_t i = 0; i < x_grid_mhz.size(); ++i) {
        out[i] = susceptibility_at(chain, s, kappa_ex_mhz, x_grid_mhz[i]);
    }
    return out;
}

std::complex<double> transmission(const SteadySolution& solution) {
    return 1.0 - solution.susceptibility;
}

TransparencyPoint transparency_condition_general(double kappa2_mhz, double kappa3_mhz,
                                                 double omega2_mhz, double omega3_mhz) {
    if (!(kappa2_mhz > 0.0) || !(kappa3_mhz > 0.0)) {
        fail(Errc::NonPositiveRate, "kappa2 and kappa3 must be > 0");
    }
    const double dk = kappa2_mhz - kappa3_mhz;
    const double dw = omega2_mhz - omega3_mhz;
    if (dk == 0.0) {
        const double scale = std::max({1.0, std::abs(omega2_mhz), std::abs(omega3_mhz)});
        if (std::abs(dw) <= 1e-9 * scale) {
            // Degenerate family: the condition reduces to J2 = kappa2 at the
            // common frequency.
            return {kappa2_mhz, omega2_mhz};
        }
        fail(Errc::EqualRates, "kappa2 = kappa3 with distinct frequencies has no finite solution");
    }
    const double j2 = std::sqrt(kappa2_mhz * kappa3_mhz * (dw * dw + dk * dk)) / std::abs(dk);
    const double omega_p = (omega3_mhz * kappa2_mhz - omega2_mhz * kappa3_mhz) / dk;
    return {j2, omega_p};
}

TransparencyPoint transparency_condition_four(double kappa2_mhz, double kappa3_mhz,
                                              double kappa4_mhz, double j3_mhz,
                                              double omega0_mhz) {
    if (!(kappa2_mhz > 0.0) || !(kappa3_mhz > 0.0) || !(kappa4_mhz > 0.0) || !(j3_mhz > 0.0)) {
        fail(Errc::NonPositiveRate, "all rates and J3 must be > 0");
    }
    const double j2 =
        std::sqrt(kappa2_mhz * (j3_mhz * j3_mhz + kappa3_mhz * kappa4_mhz) / kappa4_mhz);
    return {j2, omega0_mhz};
}

Eigen::Vector3cd dark_state(const ResonatorChain& chain, double gain_mhz, const PumpDrive& pump) {
    require_valid(chain);
    if (chain.size() != 3) {
        fail(Errc::ConditionsNotMet, "dark configuration is defined for a 3-resonator chain");
    }
    if (!chain.degenerate_frequencies()) {
        fail(Errc::ConditionsNotMet, "resonance frequencies must be degenerate");
    }
    const double omega0 = chain.omega_ref_mhz();
    const double freq_scale = std::max(1.0, std::abs(omega0));
    if (std::abs(pump.omega_p_mhz - omega0) > 1e-9 * freq_scale) {
        fail(Errc::ConditionsNotMet, "pump must be resonant (x = 0)");
    }
    if (!(gain_mhz > 0.0)) {
        fail(Errc::ConditionsNotMet, "active resonator must carry positive effective gain");
    }
    const double kappa3 = chain.resonators[2].rate_mhz;
    const double j1 = chain.couplings_mhz[0];
    const double j2 = chain.couplings_mhz[1];
    const double j2_star = std::sqrt(gain_mhz * kappa3);
    if (std::abs(j2 - j2_star) > 1e-9 * j2_star) {
        fail(Errc::ConditionsNotMet, "J2 must equal sqrt(kappa2 kappa3)");
    }
    const double drive = sqrt_two_kex(chain) * pump.amplitude_sqrt_mhz;
    return Eigen::Vector3cd(std::complex<double>(0.0, 0.0), kI * drive / j1,
                            -std::sqrt(gain_mhz / kappa3) * drive / j1);
}

DarkBrightBasis dark_bright_basis(double kappa2_mhz, double kappa3_mhz) {
    if (!(kappa2_mhz > 0.0) || !(kappa3_mhz > 0.0)) {
        fail(Errc::NonPositiveRate, "kappa2 and kappa3 must be > 0");
    }
    const std::complex<double> c2 = -kI * std::sqrt(kappa2_mhz);
    const double c3 = std::sqrt(kappa3_mhz);
    DarkBrightBasis basis;
    basis.dark_coeffs = Eigen::Vector2cd(c2, c3);
    basis.bright_coeffs = Eigen::Vector2cd(c2, -c3);
    return basis;
}

double imag_slope_at_resonance(double kappa_ex_mhz, double kappa2_mhz, double kappa3_mhz,
                               double j1_mhz) {
    if (j1_mhz == 0.0) fail(Errc::ZeroCoupling, "J1 must be nonzero");
    if (!(kappa3_mhz > 0.0)) fail(Errc::NonPositiveRate, "kappa3 must be > 0");
    return 2.0 * kappa_ex_mhz * (kappa2_mhz - kappa3_mhz) / (j1_mhz * j1_mhz * kappa3_mhz);
}

double group_delay(const ResonatorChain& chain, double gain_mhz, const PumpDrive& pump,
                   double d_omega_mhz) {
    if (!(d_omega_mhz > 0.0)) fail(Errc::InvalidArgument, "d_omega must be > 0");
    const auto t_at = [&](double omega_p) {
        // eps_T is independent of the drive amplitude; evaluate at unit drive.
        const PumpDrive unit{omega_p, 1.0};
        const std::complex<double> a1 = steady_state_continued_fraction(chain, gain_mhz, unit);
        return 1.0 - sqrt_two_kex(chain) * a1;
    };
    const std::complex<double> t_plus = t_at(pump.omega_p_mhz + d_omega_mhz);
    const std::complex<double> t_minus = t_at(pump.omega_p_mhz - d_omega_mhz);
    if (t_plus == 0.0 || t_minus == 0.0) {
        fail(Errc::ZeroTransmission, "arg(t) undefined at |t| = 0");
    }
    double dphi = std::arg(t_plus) - std::arg(t_minus);
    if (dphi > pi) dphi -= 2.0 * pi;
    if (dphi < -pi) dphi += 2.0 * pi;
    return dphi / (2.0 * d_omega_mhz);
}

TransparencyWindow fwhm_transparency_window(const ResonatorChain& chain, double gain_mhz,
                                            double kappa_ex_mhz) {
    require_valid(chain);
    require_degenerate(chain);
    const auto s = signed_rates(chain, gain_mhz);
    const auto re_eps = [&](double x) {
        return susceptibility_at(chain, s, kappa_ex_mhz, x).real();
    };

    const double kappa1 = chain.resonators.front().rate_mhz;
    const double j1 = chain.couplings_mhz.front();
    const double estimate = j1 * j1 / kappa1;

    const double v0 = re_eps(0.0);
    const double probe = 1e-3 * estimate;
    if (!(re_eps(probe) > v0) || !(re_eps(-probe) > v0)) {
        fail(Errc::NoDip, "Re eps_T is not locally minimal at x = 0");
    }

    const auto half_width = [&](double sign) {
        // March outward to the shoulder of the dip, then bisect back to the
        // half-depth crossing.
        double x = probe;
        double run_max = v0;
        double x_at_max = 0.0;
        while (true) {
            const double v = re_eps(sign * x);
            if (v > run_max) {
                run_max = v;
                x_at_max = x;
            }
            if ((run_max > v0 && v < 0.5 * (v0 + run_max)) || x > 1e9 * estimate) break;
            x *= 1.5;
        }
        if (!(run_max > v0)) fail(Errc::NoDip, "no shoulder found around the dip");
        const double target = 0.5 * (v0 + run_max);
        double lo = 0.0;
        double hi = x_at_max;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * x_at_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            (re_eps(sign * mid) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    TransparencyWindow window;
    window.fwhm_mhz = 0.5 * (half_width(+1.0) + half_width(-1.0));
    window.small_j1_estimate_mhz = estimate;
    return window;
}

CooperativityResult cooperativity_transmission(double kappa1_mhz, double kappa2_mhz,
                                               double j1_mhz) {
    if (!(kappa1_mhz > 0.0) || !(kappa2_mhz > 0.0) || !(j1_mhz > 0.0)) {
        fail(Errc::NonPositiveRate, "all inputs must be > 0");
    }
    CooperativityResult out;
    out.cooperativity = j1_mhz * j1_mhz / (kappa1_mhz * kappa2_mhz);
    const double c = out.cooperativity;
    out.transmission = c * c / ((c + 1.0) * (c + 1.0));
    return out;
}

}  // namespace cavitytrio
