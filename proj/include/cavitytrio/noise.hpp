#pragma once

#include <Eigen/Dense>

#include "cavitytrio/model.hpp"

namespace cavitytrio {

/// Gain-noise photon estimates for the stabilized chain. per_mode[k] is the
/// candidate extra-photon number |C_{1,k} * g2s / lambda_k|^2 with C the
/// unit-norm, phase-anchored eigenvector matrix of the rotating-frame M and
/// lambda_k its eigenvalue in canonical order. `selected` is the entry whose
/// eigenvalue has the largest magnitude.
struct NoiseEstimate {
    Eigen::VectorXd per_mode;
    double selected = 0.0;
    double g2s_mhz = 0.0;
    Eigen::VectorXcd eigenvalues;
};

/// Estimates the extra photons driven into the pumped resonator by the gain
/// noise after stabilization. The chain's active rate field must hold the
/// saturated effective gain; g2s is the gross saturated gain
/// (effective gain + gamma2) and enters only as the noise-drive scale.
/// Throws DefectiveMatrix when the eigenvector matrix is numerically
/// singular (condition above 1e12).
NoiseEstimate noise_photon_estimates(const ResonatorChain& chain, double g2s_mhz,
                                     double gamma2_mhz);

/// Pump power at which the coherent drive amplitude equals the unit noise
/// amplitude (eps_p = 1 sqrt(Hz)): P = hbar * (2 pi c / lambda) * 1 Hz.
double noise_floor_power(double wavelength_m);

}  // namespace cavitytrio
