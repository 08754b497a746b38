#include <doctest.h>

#include <cmath>
#include <random>

#include "cavitytrio/noise.hpp"
#include "cavitytrio/stability.hpp"
#include "chains.hpp"

using namespace cavitytrio;
using testchains::trio;

TEST_CASE("gain-noise photon estimate") {
    SUBCASE("worked saturated example") {
        // Saturated effective gain 0.195 MHz with gamma2 = 5 MHz, so the
        // gross rate entering the noise transfer is 5.195 MHz.
        const auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
        const auto estimate = noise_photon_estimates(chain, 5.195, 5.0);
        CHECK(estimate.selected == doctest::Approx(3.6e-2).epsilon(0.15));
        double largest = 0.0;
        for (Eigen::Index k = 0; k < estimate.eigenvalues.size(); ++k) {
            largest = std::max(largest, std::abs(estimate.eigenvalues[k]));
        }
        CHECK(largest == doctest::Approx(19.97).epsilon(0.01));
    }
    SUBCASE("no gain, no extra photons") {
        const auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
        const auto estimate = noise_photon_estimates(chain, 0.0, 0.0);
        for (Eigen::Index k = 0; k < estimate.per_mode.size(); ++k) {
            CHECK(estimate.per_mode[k] == 0.0);
        }
        CHECK(estimate.selected == 0.0);
    }
    SUBCASE("decoupling the chain removes the transfer into the pumped mode") {
        auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
        chain.couplings_mhz = {1e-9, 1e-9};
        const auto estimate = noise_photon_estimates(chain, 0.195, 0.0);
        // The mode hosting the gain is the one with a positive real
        // eigenvalue; its row-1 weight must vanish with the couplings.
        for (Eigen::Index k = 0; k < estimate.eigenvalues.size(); ++k) {
            if (estimate.eigenvalues[k].real() > 0.0) {
                CHECK(estimate.per_mode[k] < 1e-12);
            }
        }
    }
    SUBCASE("scales quadratically with the gain rate") {
        const auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
        const auto base = noise_photon_estimates(chain, 2.0, 0.0);
        const auto doubled = noise_photon_estimates(chain, 4.0, 0.0);
        for (Eigen::Index k = 0; k < base.per_mode.size(); ++k) {
            CHECK(doubled.per_mode[k] ==
                  doctest::Approx(4.0 * base.per_mode[k]).epsilon(1e-12));
        }
    }
    SUBCASE("finite and non-negative over random stable chains") {
        std::mt19937_64 rng(67);
        std::uniform_real_distribution<double> rate(0.1, 5.0);
        int accepted = 0;
        while (accepted < 25) {
            const double gain = 0.1 * rate(rng);
            const auto chain = trio(2.0 * rate(rng), gain, rate(rng), rate(rng), rate(rng));
            if (!classify_stability(chain, gain, PumpDrive{0.0, 1.0}).stable) continue;
            ++accepted;
            const auto estimate = noise_photon_estimates(chain, gain, 0.0);
            for (Eigen::Index k = 0; k < estimate.per_mode.size(); ++k) {
                CHECK(std::isfinite(estimate.per_mode[k]));
                CHECK(estimate.per_mode[k] >= 0.0);
            }
            CHECK(std::isfinite(estimate.selected));
        }
    }
    SUBCASE("deterministic across repeated evaluation") {
        const auto chain = trio(10.0, 0.195, 5.0, 20.0, 1.0);
        const auto a = noise_photon_estimates(chain, 5.195, 5.0);
        const auto b = noise_photon_estimates(chain, 5.195, 5.0);
        for (Eigen::Index k = 0; k < a.per_mode.size(); ++k) {
            CHECK(a.per_mode[k] == b.per_mode[k]);
        }
    }
}

TEST_CASE("noise floor power") {
    SUBCASE("telecom wavelength") {
        CHECK(noise_floor_power(1550e-9) == doctest::Approx(1.28e-19).epsilon(0.01));
    }
    SUBCASE("halving the wavelength doubles the power") {
        CHECK(noise_floor_power(775e-9) ==
              doctest::Approx(2.0 * noise_floor_power(1550e-9)).epsilon(1e-12));
    }
    SUBCASE("round trip against the amplitude conversion") {
        const double p = noise_floor_power(1550e-9);
        const double eps_sqrt_mhz = pump_amplitude_from_power(p, 1550e-9);
        // 1 sqrt(Hz) = 1e-3 sqrt(MHz)
        CHECK(eps_sqrt_mhz == doctest::Approx(1e-3).epsilon(1e-9));
    }
    SUBCASE("rejects non-positive wavelength") {
        CHECK_THROWS_AS(noise_floor_power(0.0), Error);
    }
}
