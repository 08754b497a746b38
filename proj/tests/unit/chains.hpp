#pragma once

// Shared chain builders for the figure-caption parameter sets used across
// the test suites.

#include <random>

#include "cavitytrio/model.hpp"

namespace testchains {

using namespace cavitytrio;

/// kappa1 = 2 kappa_ex, degenerate frequencies at omega0, active middle
/// resonator (rate field carries the constant effective gain).
inline ResonatorChain trio(double kappa1, double gain, double kappa3, double j1, double j2,
                           double omega0 = 0.0, double gamma2 = 0.0) {
    ResonatorChain chain;
    chain.resonators = {
        {omega0, Role::Passive, kappa1, kappa1 / 2.0},
        {omega0, Role::Active, gain, gamma2},
        {omega0, Role::Passive, kappa3, 0.0},
    };
    chain.couplings_mhz = {j1, j2};
    chain.kappa_ex_mhz = kappa1 / 2.0;
    return chain;
}

inline ResonatorChain passive_pair(double kappa1, double kappa2, double j1, double kappa_ex) {
    ResonatorChain chain;
    chain.resonators = {
        {0.0, Role::Passive, kappa1, kappa1 - kappa_ex},
        {0.0, Role::Passive, kappa2, 0.0},
    };
    chain.couplings_mhz = {j1};
    chain.kappa_ex_mhz = kappa_ex;
    return chain;
}

// Figure parameter sets (all rates in MHz).
inline ResonatorChain fig1_inset() { return trio(10.0, 0.2, 5.0, 2.0, 1.0); }
inline ResonatorChain fig1b() { return trio(10.0, 0.2, 5.0, 20.0, 1.0); }
inline ResonatorChain fig3a() { return trio(20.0, 0.01, 20.0, 0.01, std::sqrt(0.01 * 20.0)); }
inline ResonatorChain fig3b() { return trio(10.0, 1.0, 0.1, 4.0, std::sqrt(1.0 * 0.1)); }
inline ResonatorChain fig4(double j2 = 0.6) { return trio(20.0, 0.06, 6.0, 1.0, j2); }
inline ResonatorChain fig_s2a(double j1, double j2) { return trio(40.0, 0.001, 10.0, j1, j2); }
inline ResonatorChain appendix_a_tuning() {
    return trio(2.0, 0.01, 1.0, 10.0, 0.1);
}
inline ResonatorChain appendix_a_depth() {
    return trio(2.0, 1e-3, 1.0, 10.0, std::sqrt(1e-3));
}

inline PumpDrive resonant(double amplitude = 1.0) { return PumpDrive{0.0, amplitude}; }

/// Uniform log-scale draw over [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    return std::exp(dist(rng));
}

}  // namespace testchains
