#include "cavitytrio/model.hpp"

#include <cmath>

#include "cavitytrio/constants.hpp"

namespace cavitytrio {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::optional<std::size_t> ResonatorChain::active_index() const noexcept {
    for (std::size_t k = 0; k < resonators.size(); ++k) {
        if (resonators[k].role == Role::Active) return k;
    }
    return std::nullopt;
}

bool ResonatorChain::degenerate_frequencies(double rel_tol) const noexcept {
    if (resonators.empty()) return false;
    const double ref = resonators.front().omega_mhz;
    const double scale = std::max(1.0, std::abs(ref));
    for (const auto& r : resonators) {
        if (std::abs(r.omega_mhz - ref) > rel_tol * scale) return false;
    }
    return true;
}

std::optional<ChainViolation> validate_chain(const ResonatorChain& chain) {
    if (chain.resonators.empty()) {
        return ChainViolation{Errc::InvalidArgument, "chain has no resonators"};
    }
    for (std::size_t k = 0; k < chain.resonators.size(); ++k) {
        const auto& r = chain.resonators[k];
        if (r.rate_mhz < 0.0 || !std::isfinite(r.rate_mhz)) {
            return ChainViolation{Errc::NegativeRate,
                                  "resonator " + std::to_string(k + 1) + " has rate < 0"};
        }
        if (r.intrinsic_loss_mhz < 0.0 || !std::isfinite(r.intrinsic_loss_mhz)) {
            return ChainViolation{Errc::NegativeRate,
                                  "resonator " + std::to_string(k + 1) + " has intrinsic loss < 0"};
        }
    }
    std::size_t active_count = 0;
    for (const auto& r : chain.resonators) {
        if (r.role == Role::Active) ++active_count;
    }
    // A single active resonator is the scope of this library; chains with
    // none are accepted so that purely dissipative reference structures
    // (two- and three-resonator induced transparency) remain expressible.
    if (active_count > 1) {
        return ChainViolation{Errc::MultipleActive,
                              std::to_string(active_count) + " active resonators; at most one supported"};
    }
    if (chain.couplings_mhz.size() + 1 != chain.resonators.size()) {
        return ChainViolation{Errc::CouplingCountMismatch,
                              "expected " + std::to_string(chain.resonators.size() - 1) +
                                  " couplings, got " + std::to_string(chain.couplings_mhz.size())};
    }
    for (std::size_t k = 0; k < chain.couplings_mhz.size(); ++k) {
        if (!(chain.couplings_mhz[k] > 0.0) || !std::isfinite(chain.couplings_mhz[k])) {
            return ChainViolation{Errc::InvalidArgument,
                                  "coupling J" + std::to_string(k + 1) + " must be > 0"};
        }
    }
    if (!(chain.kappa_ex_mhz > 0.0) || !std::isfinite(chain.kappa_ex_mhz)) {
        return ChainViolation{Errc::InvalidArgument, "kappa_ex must be > 0"};
    }
    if (chain.kappa_ex_mhz > chain.resonators.front().rate_mhz) {
        return ChainViolation{Errc::ExternalExceedsTotal,
                              "kappa_ex exceeds kappa1 (kappa1 = kappa_ex + kappa_in)"};
    }
    return std::nullopt;
}

void require_valid(const ResonatorChain& chain) {
    if (auto violation = validate_chain(chain)) {
        throw Error(violation->code, violation->detail);
    }
}

std::vector<double> signed_rates(const ResonatorChain& chain, double gain_mhz) {
    std::vector<double> s(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& r = chain.resonators[k];
        s[k] = (r.role == Role::Active) ? gain_mhz : -r.rate_mhz;
    }
    return s;
}

Eigen::MatrixXcd dynamical_matrix(const ResonatorChain& chain, double gain_mhz,
                                  double omega_p_mhz, Frame frame) {
    require_valid(chain);
    const auto n = static_cast<Eigen::Index>(chain.size());
    const auto s = signed_rates(chain, gain_mhz);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double omega_k = chain.resonators[static_cast<std::size_t>(k)].omega_mhz;
        const double imag_part =
            (frame == Frame::Rotating) ? omega_p_mhz - omega_k : -omega_k;
        m(k, k) = std::complex<double>(s[static_cast<std::size_t>(k)], imag_part);
    }
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const std::complex<double> coupling = kI * chain.couplings_mhz[static_cast<std::size_t>(k)];
        m(k, k + 1) = coupling;
        m(k + 1, k) = coupling;
    }
    return m;
}

double pump_amplitude_from_power(double power_watts, double wavelength_m) {
    if (!(wavelength_m > 0.0)) {
        fail(Errc::NonPositiveWavelength, "wavelength must be > 0");
    }
    if (power_watts < 0.0) {
        fail(Errc::InvalidArgument, "power must be >= 0");
    }
    const double omega_p = optical_angular_frequency_rad_s(wavelength_m);
    const double eps_sq_per_s = power_watts / (hbar_js * omega_p);
    return std::sqrt(eps_sq_per_s / rad_s_per_mhz);
}

double power_from_amplitude(double amplitude_sqrt_mhz, double wavelength_m) {
    if (!(wavelength_m > 0.0)) {
        fail(Errc::NonPositiveWavelength, "wavelength must be > 0");
    }
    const double omega_p = optical_angular_frequency_rad_s(wavelength_m);
    const double eps_sq_per_s = amplitude_sqrt_mhz * amplitude_sqrt_mhz * rad_s_per_mhz;
    return eps_sq_per_s * hbar_js * omega_p;
}

PumpDrive PumpDrive::from_power(double omega_p_mhz, double power_watts, double wavelength_m) {
    return PumpDrive{omega_p_mhz, pump_amplitude_from_power(power_watts, wavelength_m)};
}

void validate_gain(const GainModel& gain) {
    if (const auto* sat = std::get_if<SaturatingGain>(&gain)) {
        if (!(sat->kappa20_mhz > 0.0)) fail(Errc::InvalidArgument, "kappa20 must be > 0");
        if (!(sat->saturation_intensity > 0.0)) fail(Errc::InvalidArgument, "I_S must be > 0");
        if (sat->gamma2_mhz < 0.0) fail(Errc::NegativeRate, "gamma2 must be >= 0");
    } else {
        const auto& c = std::get<ConstantGain>(gain);
        if (!std::isfinite(c.kappa2_mhz)) fail(Errc::InvalidArgument, "kappa2 must be finite");
    }
}

double effective_gain(const GainModel& gain, double photon_number) {
    if (const auto* sat = std::get_if<SaturatingGain>(&gain)) {
        return sat->kappa20_mhz / (1.0 + photon_number / sat->saturation_intensity) -
               sat->gamma2_mhz;
    }
    return std::get<ConstantGain>(gain).kappa2_mhz;
}

double unsaturated_effective_gain(const GainModel& gain) {
    if (const auto* sat = std::get_if<SaturatingGain>(&gain)) {
        return sat->kappa20_mhz - sat->gamma2_mhz;
    }
    return std::get<ConstantGain>(gain).kappa2_mhz;
}

double gain_ceiling_mhz(const GainModel& gain) {
    if (const auto* sat = std::get_if<SaturatingGain>(&gain)) return sat->kappa20_mhz;
    return std::get<ConstantGain>(gain).kappa2_mhz;
}

double gamma2_mhz(const GainModel& gain) {
    if (const auto* sat = std::get_if<SaturatingGain>(&gain)) return sat->gamma2_mhz;
    return 0.0;
}

}  // namespace cavitytrio
