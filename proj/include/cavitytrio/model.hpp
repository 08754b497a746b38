#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cavitytrio/errors.hpp"

namespace cavitytrio {

enum class Role { Passive, Active };

/// One microresonator in the chain. `rate_mhz` is the damping rate for a
/// passive resonator and the effective gain rate for the active one (the
/// constant-gain value; saturating gain replaces it dynamically).
/// `intrinsic_loss_mhz` is gamma2 for the active resonator and, for the
/// pumped resonator, the kappa_in share of kappa1 = kappa_ex + kappa_in.
struct Resonator {
    double omega_mhz = 0.0;
    Role role = Role::Passive;
    double rate_mhz = 0.0;
    double intrinsic_loss_mhz = 0.0;
};

/// A linear chain of resonators. Resonator 0 is the pumped cavity coupled
/// to the waveguide at rate kappa_ex; couplings_mhz[k] couples resonators
/// k and k+1. User-facing I/O is 1-based; the in-memory layout is 0-based.
struct ResonatorChain {
    std::vector<Resonator> resonators;
    std::vector<double> couplings_mhz;
    double kappa_ex_mhz = 0.0;

    std::size_t size() const noexcept { return resonators.size(); }
    std::optional<std::size_t> active_index() const noexcept;
    bool degenerate_frequencies(double rel_tol = 1e-9) const noexcept;
    /// Reference frequency for detunings x = omega_p - omega_ref.
    double omega_ref_mhz() const noexcept { return resonators.front().omega_mhz; }
};

struct ChainViolation {
    Errc code;
    std::string detail;
};

/// Checks all chain invariants; returns the first violation found, if any.
std::optional<ChainViolation> validate_chain(const ResonatorChain& chain);

/// Throws Error(InvalidChain) carrying the first violated invariant.
void require_valid(const ResonatorChain& chain);

enum class Frame { Rotating, Lab };

/// Coupled-mode matrix M of the chain. In the rotating frame the diagonal is
/// -kappa_k + i*(omega_p - omega_k) for passive resonators and
/// +gain + i*(omega_p - omega_2) for the active one; in the lab frame the
/// detunings are replaced by -i*omega_k. Off-diagonals are i*J_k on both
/// sides of the diagonal. `gain_mhz` is the instantaneous effective gain of
/// the active resonator and is ignored for an all-passive chain.
Eigen::MatrixXcd dynamical_matrix(const ResonatorChain& chain, double gain_mhz,
                                  double omega_p_mhz, Frame frame = Frame::Rotating);

/// Signed diagonal rates: +gain for the active resonator, -rate for passive
/// ones. This is the real part of the rotating-frame diagonal.
std::vector<double> signed_rates(const ResonatorChain& chain, double gain_mhz);

struct PumpDrive {
    double omega_p_mhz = 0.0;
    double amplitude_sqrt_mhz = 0.0;

    static PumpDrive from_power(double omega_p_mhz, double power_watts, double wavelength_m);
};

/// eps_p [sqrt(MHz)] such that eps_p^2, converted to 1/s, equals
/// P / (hbar * 2*pi*c/lambda).
double pump_amplitude_from_power(double power_watts, double wavelength_m);
double power_from_amplitude(double amplitude_sqrt_mhz, double wavelength_m);

struct ConstantGain {
    double kappa2_mhz = 0.0;  // effective gain rate
};

/// Saturating gain law g2(n2) = kappa20 / (1 + n2 / I_S); the effective gain
/// is g2 - gamma2.
struct SaturatingGain {
    double kappa20_mhz = 0.0;
    double saturation_intensity = 0.0;  // I_S, photons
    double gamma2_mhz = 0.0;
};

using GainModel = std::variant<ConstantGain, SaturatingGain>;

void validate_gain(const GainModel& gain);

/// Instantaneous effective gain at intracavity photon number n2.
double effective_gain(const GainModel& gain, double photon_number);

/// The I_S -> infinity value: kappa2 for constant gain, kappa20 - gamma2 for
/// saturating gain. Used for conservative stability pre-checks.
double unsaturated_effective_gain(const GainModel& gain);

/// Scale used by steady-state detection on the gain trace (kappa2 or kappa20).
double gain_ceiling_mhz(const GainModel& gain);

double gamma2_mhz(const GainModel& gain);

}  // namespace cavitytrio
