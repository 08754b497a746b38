#include "cavitytrio/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cavitytrio/constants.hpp"

namespace cavitytrio {

NoiseEstimate noise_photon_estimates(const ResonatorChain& chain, double g2s_mhz,
                                     double gamma2_mhz) {
    require_valid(chain);
    if (g2s_mhz < 0.0 || gamma2_mhz < 0.0) {
        fail(Errc::InvalidArgument, "g2s and gamma2 must be >= 0");
    }
    // Rotating frame at resonance with the pumped resonator. The chain
    // carries the saturated effective gain in its active rate field; the
    // gross rate g2s (= effective + gamma2) only scales the noise drive, so
    // the estimate is quadratic in g2s at a fixed chain.
    const auto active = chain.active_index();
    const double effective = active ? chain.resonators[*active].rate_mhz : 0.0;
    const Eigen::MatrixXcd m =
        dynamical_matrix(chain, effective, chain.omega_ref_mhz());

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        fail(Errc::NoConvergence, "eigenvalue iteration did not converge");
    }
    const auto n = m.rows();

    // Canonical eigenpair order: descending real part, ties by descending
    // imaginary part.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto raw_values = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (raw_values[a].real() != raw_values[b].real()) {
            return raw_values[a].real() > raw_values[b].real();
        }
        return raw_values[a].imag() > raw_values[b].imag();
    });

    Eigen::MatrixXcd vectors(n, n);
    Eigen::VectorXcd values(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        values[k] = raw_values[order[static_cast<std::size_t>(k)]];
        Eigen::VectorXcd column = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        column.normalize();
        // Phase anchor: rotate so the largest-magnitude component is real
        // and positive.
        Eigen::Index anchor = 0;
        column.cwiseAbs().maxCoeff(&anchor);
        const std::complex<double> pivot = column[anchor];
        if (std::abs(pivot) > 0.0) column *= std::conj(pivot) / std::abs(pivot);
        vectors.col(k) = column;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors);
    const double smin = svd.singularValues()(n - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e12) {
        fail(Errc::DefectiveMatrix, "eigenvector matrix is numerically singular");
    }

    NoiseEstimate estimate;
    estimate.g2s_mhz = g2s_mhz;
    estimate.eigenvalues = values;
    estimate.per_mode.resize(n);
    Eigen::Index selected_index = 0;
    double largest_magnitude = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double magnitude = std::abs(values[k]);
        if (magnitude == 0.0) {
            fail(Errc::DefectiveMatrix, "zero eigenvalue; noise transfer is unbounded");
        }
        const double ratio = std::abs(vectors(0, k)) * g2s_mhz / magnitude;
        estimate.per_mode[k] = ratio * ratio;
        if (magnitude > largest_magnitude) {
            largest_magnitude = magnitude;
            selected_index = k;
        }
    }
    estimate.selected = estimate.per_mode[selected_index];
    return estimate;
}

double noise_floor_power(double wavelength_m) {
    if (!(wavelength_m > 0.0)) {
        fail(Errc::NonPositiveWavelength, "wavelength must be > 0");
    }
    return hbar_js * optical_angular_frequency_rad_s(wavelength_m) * 1.0;
}

}  // namespace cavitytrio
