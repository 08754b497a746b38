#include "cavitytrio/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cavitytrio/parallel.hpp"

namespace cavitytrio {

const char* regime_name(Regime regime) noexcept {
    switch (regime) {
        case Regime::Stable: return "stable";
        case Regime::Marginal: return "marginal";
        case Regime::Unstable: return "unstable";
    }
    return "unknown";
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0 || matrix.rows() > 8) {
        fail(Errc::InvalidArgument, "expected a square matrix with N <= 8");
    }
    if (!matrix.allFinite()) {
        fail(Errc::InvalidArgument, "matrix entries must be finite");
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        fail(Errc::NoConvergence, "eigenvalue iteration did not converge");
    }
    Eigen::VectorXcd values = solver.eigenvalues();
    std::sort(values.data(), values.data() + values.size(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return values;
}

StabilityReport classify_matrix(const Eigen::MatrixXcd& matrix, double marginal_tol_mhz) {
    StabilityReport report;
    report.eigenvalues = eigenvalues(matrix);
    report.max_real_part_mhz = report.eigenvalues(0).real();
    report.margin_mhz = -report.max_real_part_mhz;
    report.stable = report.max_real_part_mhz <= marginal_tol_mhz;
    if (std::abs(report.max_real_part_mhz) <= marginal_tol_mhz) {
        report.regime = Regime::Marginal;
    } else {
        report.regime = report.stable ? Regime::Stable : Regime::Unstable;
    }
    return report;
}

StabilityReport classify_stability(const ResonatorChain& chain, double gain_mhz,
                                   const PumpDrive& pump, double marginal_tol_mhz) {
    return classify_matrix(dynamical_matrix(chain, gain_mhz, pump.omega_p_mhz),
                           marginal_tol_mhz);
}

ClosedFormThresholds closed_form_thresholds(double kappa1_mhz, double kappa2_mhz,
                                            double kappa3_mhz, std::optional<double> j1_mhz,
                                            std::optional<double> j2_mhz) {
    if (!(kappa1_mhz > 0.0) || !(kappa2_mhz > 0.0) || !(kappa3_mhz > 0.0)) {
        fail(Errc::NonPositiveRate, "rates must be > 0");
    }
    if (!(kappa2_mhz < kappa3_mhz)) {
        fail(Errc::RegimeNotCovered,
             "closed forms cover kappa2 < kappa3 only; classify numerically instead");
    }
    if (j1_mhz.has_value() == j2_mhz.has_value()) {
        fail(Errc::InvalidArgument, "exactly one of j1/j2 must be given");
    }
    ClosedFormThresholds out;
    out.sqrt_k1k2_mhz = std::sqrt(kappa1_mhz * kappa2_mhz);
    out.sqrt_k2k3_mhz = std::sqrt(kappa2_mhz * kappa3_mhz);
    if (j1_mhz) {
        if (*j1_mhz < out.sqrt_k1k2_mhz) {
            out.min_stable_j2_mhz = std::sqrt(
                (kappa1_mhz * kappa2_mhz * kappa3_mhz - *j1_mhz * *j1_mhz * kappa3_mhz) /
                kappa1_mhz);
        }
    } else {
        if (*j2_mhz < out.sqrt_k2k3_mhz) {
            out.min_stable_j1_mhz = std::sqrt(
                (kappa1_mhz * kappa2_mhz * kappa3_mhz - *j2_mhz * *j2_mhz * kappa1_mhz) /
                kappa3_mhz);
        }
    }
    return out;
}

StabilityMap stability_map(const ResonatorChain& chain_template, double gain_mhz,
                           std::span<const double> j1_grid_mhz,
                           std::span<const double> j2_grid_mhz, double marginal_tol_mhz) {
    require_valid(chain_template);
    if (chain_template.size() != 3) {
        fail(Errc::InvalidArgument, "stability map requires a 3-resonator chain template");
    }
    for (double j : j1_grid_mhz) {
        if (!(j > 0.0) || !std::isfinite(j)) fail(Errc::InvalidArgument, "J1 grid must be positive");
    }
    for (double j : j2_grid_mhz) {
        if (!(j > 0.0) || !std::isfinite(j)) fail(Errc::InvalidArgument, "J2 grid must be positive");
    }

    StabilityMap map;
    map.j1_grid_mhz.assign(j1_grid_mhz.begin(), j1_grid_mhz.end());
    map.j2_grid_mhz.assign(j2_grid_mhz.begin(), j2_grid_mhz.end());
    map.cells.resize(j1_grid_mhz.size() * j2_grid_mhz.size());

    const double omega_p = chain_template.omega_ref_mhz();
    parallel::parallel_for(map.cells.size(), [&](std::size_t idx) {
        const std::size_t i = idx / j2_grid_mhz.size();
        const std::size_t j = idx % j2_grid_mhz.size();
        ResonatorChain chain = chain_template;
        chain.couplings_mhz[0] = j1_grid_mhz[i];
        chain.couplings_mhz[1] = j2_grid_mhz[j];
        const auto report = classify_matrix(dynamical_matrix(chain, gain_mhz, omega_p),
                                            marginal_tol_mhz);
        map.cells[idx] = {j1_grid_mhz[i], j2_grid_mhz[j], report.max_real_part_mhz,
                          report.regime, report.stable};
    });

    const double kappa2 = gain_mhz;
    const double kappa1 = chain_template.resonators[0].rate_mhz;
    const double kappa3 = chain_template.resonators[2].rate_mhz;
    const bool active_middle = chain_template.resonators[1].role == Role::Active;
    if (active_middle && kappa2 > 0.0 && kappa2 < kappa3 &&
        chain_template.degenerate_frequencies()) {
        for (double j1 : j1_grid_mhz) {
            const auto thresholds =
                closed_form_thresholds(kappa1, kappa2, kappa3, j1, std::nullopt);
            map.boundary.emplace_back(j1, thresholds.min_stable_j2_mhz.value_or(0.0));
        }
    }
    return map;
}

double marginal_j1(double kappa1_mhz, double kappa2_mhz, double kappa3_mhz, double j2_mhz,
                   double bracket_lo_mhz, double bracket_hi_mhz, double tol_mhz) {
    if (!(bracket_lo_mhz > 0.0) || !(bracket_hi_mhz > bracket_lo_mhz)) {
        fail(Errc::InvalidArgument, "bracket must satisfy 0 < lo < hi");
    }
    const auto max_re = [&](double j1) {
        Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
        m(0, 0) = -kappa1_mhz;
        m(1, 1) = kappa2_mhz;
        m(2, 2) = -kappa3_mhz;
        m(0, 1) = m(1, 0) = std::complex<double>(0.0, j1);
        m(1, 2) = m(2, 1) = std::complex<double>(0.0, j2_mhz);
        return classify_matrix(m).max_real_part_mhz;
    };
    double f_lo = max_re(bracket_lo_mhz);
    double f_hi = max_re(bracket_hi_mhz);
    if (f_lo == 0.0) return bracket_lo_mhz;
    if (f_hi == 0.0) return bracket_hi_mhz;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        fail(Errc::NoSignChange, "max Re lambda does not change sign over the bracket");
    }
    double lo = bracket_lo_mhz;
    double hi = bracket_hi_mhz;
    while (hi - lo > tol_mhz) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = max_re(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace cavitytrio
