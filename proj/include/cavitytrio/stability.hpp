#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cavitytrio/model.hpp"

namespace cavitytrio {

inline constexpr double default_marginal_tol_mhz = 1e-6;

enum class Regime { Stable, Marginal, Unstable };

const char* regime_name(Regime regime) noexcept;

/// Eigenvalues in the canonical order: descending real part, ties broken by
/// descending imaginary part.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& matrix);

/// Stability verdict for a coupled-mode matrix. `stable` follows the
/// non-positive-real-parts criterion and therefore includes marginal
/// spectra; `regime` still distinguishes Marginal.
struct StabilityReport {
    Eigen::VectorXcd eigenvalues;
    double max_real_part_mhz = 0.0;
    bool stable = false;
    double margin_mhz = 0.0;  // -max_real_part
    Regime regime = Regime::Stable;
};

StabilityReport classify_matrix(const Eigen::MatrixXcd& matrix,
                                double marginal_tol_mhz = default_marginal_tol_mhz);

/// Classifies the rotating-frame matrix at the pump frequency (eigenvalue
/// real parts are frame invariant).
StabilityReport classify_stability(const ResonatorChain& chain, double gain_mhz,
                                   const PumpDrive& pump,
                                   double marginal_tol_mhz = default_marginal_tol_mhz);

/// Closed-form stability thresholds for a resonant 3-chain with
/// kappa2 < kappa3. Exactly one of j1/j2 must be given; the minimum stable
/// value of the other coupling is returned when the given one is below its
/// reference value sqrt(kappa1 kappa2) resp. sqrt(kappa2 kappa3).
struct ClosedFormThresholds {
    std::optional<double> min_stable_j2_mhz;
    std::optional<double> min_stable_j1_mhz;
    double sqrt_k1k2_mhz = 0.0;
    double sqrt_k2k3_mhz = 0.0;
};

ClosedFormThresholds closed_form_thresholds(double kappa1_mhz, double kappa2_mhz,
                                            double kappa3_mhz, std::optional<double> j1_mhz,
                                            std::optional<double> j2_mhz);

struct StabilityMapCell {
    double j1_mhz = 0.0;
    double j2_mhz = 0.0;
    double max_re_lambda_mhz = 0.0;
    Regime label = Regime::Stable;
    bool stable = false;
};

struct StabilityMap {
    std::vector<double> j1_grid_mhz;
    std::vector<double> j2_grid_mhz;
    /// Row-major over (j1, j2): cells[i * j2_grid.size() + j].
    std::vector<StabilityMapCell> cells;
    /// Closed-form boundary (j1, minimum stable j2), present when
    /// kappa2 < kappa3 at resonance.
    std::vector<std::pair<double, double>> boundary;
};

/// Classifies every (J1, J2) grid point for the template chain at resonance.
/// Cells are evaluated independently (concurrently when enabled via
/// parallel.hpp) and stored in deterministic grid order.
StabilityMap stability_map(const ResonatorChain& chain_template, double gain_mhz,
                           std::span<const double> j1_grid_mhz,
                           std::span<const double> j2_grid_mhz,
                           double marginal_tol_mhz = default_marginal_tol_mhz);

/// Root of max Re lambda (J1) = 0 for a resonant 3-chain, by bracketed
/// bisection to the given coupling tolerance.
double marginal_j1(double kappa1_mhz, double kappa2_mhz, double kappa3_mhz, double j2_mhz,
                   double bracket_lo_mhz, double bracket_hi_mhz, double tol_mhz = 1e-4);

}  // namespace cavitytrio
