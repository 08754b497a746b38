#pragma once

#include <optional>
#include <string>

#include "scenario.hpp"

namespace cavitytrio::cli {

struct CommandOptions {
    std::string out_dir = ".";
    bool write_svg = false;
    Frame frame = Frame::Rotating;
    bool downsample = false;  // cap trajectory CSV at 10k rows
    std::optional<std::pair<double, double>> x_range_mhz;
    std::optional<int> points;
    std::optional<double> t_end_us;
    std::optional<GridSpec> j1_grid;
    std::optional<GridSpec> j2_grid;
    std::optional<std::pair<double, double>> bracket_mhz;
    std::optional<double> tol;
    std::string tune_parameter = "j2";
    /// Assumed intrinsic damping of the active resonator in the noise
    /// bookkeeping (g2s = effective gain + gamma2); defaults to the gain
    /// model's value.
    std::optional<double> noise_gamma2_mhz;
};

void run_spectrum(const Scenario& scenario, const CommandOptions& options);
void run_evolve(const Scenario& scenario, const CommandOptions& options);
void run_stability_map(const Scenario& scenario, const CommandOptions& options);
void run_tune(const Scenario& scenario, const CommandOptions& options);
void run_noise(const Scenario& scenario, const CommandOptions& options);
void run_scan(const Scenario& scenario, const CommandOptions& options);

}  // namespace cavitytrio::cli
