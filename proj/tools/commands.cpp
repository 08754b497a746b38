#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "cavitytrio/analytic.hpp"
#include "cavitytrio/dynamics.hpp"
#include "cavitytrio/noise.hpp"
#include "cavitytrio/parallel.hpp"
#include "cavitytrio/stability.hpp"
#include "cavitytrio/tuning.hpp"
#include "emit.hpp"
#include "svg.hpp"

#ifndef CAVITYTRIO_VERSION
#define CAVITYTRIO_VERSION "0.0.0"
#endif

namespace cavitytrio::cli {

namespace {

namespace fs = std::filesystem;

std::string out_path(const CommandOptions& options, const std::string& file) {
    fs::create_directories(options.out_dir);
    return (fs::path(options.out_dir) / file).string();
}

json base_report(const Scenario& scenario) {
    json report;
    report["tool"] = "cavitytrio";
    report["version"] = CAVITYTRIO_VERSION;
    report["scenario"] = scenario.echo;
    return report;
}

/// Effective gain entering the linear response: the saturated value for a
/// saturating model (self-consistent at the configured drive), otherwise the
/// constant rate.
double response_gain(const Scenario& scenario) {
    if (const auto* sat = std::get_if<SaturatingGain>(&scenario.gain)) {
        return saturated_fixed_point(scenario.chain, *sat, scenario.pump).g2s_mhz -
               sat->gamma2_mhz;
    }
    return std::get<ConstantGain>(scenario.gain).kappa2_mhz;
}

/// Throws UnstableRegion with the violated closed-form threshold named when
/// the resonant kappa2 < kappa3 forms apply.
void require_stable_response(const Scenario& scenario, double gain_mhz) {
    const auto report = classify_stability(scenario.chain, gain_mhz, scenario.pump);
    if (report.stable) return;
    std::string message = "scenario is dynamically unstable (max Re lambda = " +
                          format_double(report.max_real_part_mhz) + " MHz)";
    const auto& chain = scenario.chain;
    if (chain.size() == 3 && chain.degenerate_frequencies() && gain_mhz > 0.0 &&
        gain_mhz < chain.resonators[2].rate_mhz) {
        const auto thresholds =
            closed_form_thresholds(chain.resonators[0].rate_mhz, gain_mhz,
                                   chain.resonators[2].rate_mhz, chain.couplings_mhz[0],
                                   std::nullopt);
        if (thresholds.min_stable_j2_mhz) {
            message += "; J2 = " + format_double(chain.couplings_mhz[1]) +
                       " MHz is below the minimum stable J2 = " +
                       format_double(*thresholds.min_stable_j2_mhz) +
                       " MHz at J1 < sqrt(kappa1 kappa2) = " +
                       format_double(thresholds.sqrt_k1k2_mhz) + " MHz";
        }
    }
    throw Error(Errc::UnstableRegion, message);
}

std::pair<double, double> spectrum_range(const Scenario& scenario,
                                         const CommandOptions& options) {
    if (options.x_range_mhz) return *options.x_range_mhz;
    if (scenario.x_range_mhz) return *scenario.x_range_mhz;
    const double half = 5.0 * scenario.chain.resonators[0].rate_mhz;
    return {-half, half};
}

int spectrum_points(const Scenario& scenario, const CommandOptions& options) {
    if (options.points) return *options.points;
    if (scenario.points) return *scenario.points;
    return 1001;
}

}  // namespace

void run_spectrum(const Scenario& scenario, const CommandOptions& options) {
    const auto& chain = scenario.chain;
    if (chain.size() > 4) {
        fail(Errc::InvalidArgument, "spectra are provided for chains of up to 4 resonators");
    }
    const double gain = response_gain(scenario);
    require_stable_response(scenario, gain);

    const auto [x_lo, x_hi] = spectrum_range(scenario, options);
    const int points = spectrum_points(scenario, options);
    if (points < 1 || x_hi < x_lo) fail(Errc::InvalidArgument, "bad spectrum grid");

    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            points == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (points - 1);
    }
    const double step = points > 1 ? (x_hi - x_lo) / (points - 1) : 0.0;
    const double d_omega = step > 0.0 ? step * 1e-3 : 1e-9;
    const double omega_ref = chain.omega_ref_mhz();
    const double root = std::sqrt(2.0 * chain.kappa_ex_mhz);

    struct Row {
        double x, re, im, abs_t, arg_t, delay;
    };
    std::vector<Row> rows(grid.size());
    parallel::parallel_for(grid.size(), [&](std::size_t i) {
        const PumpDrive probe{omega_ref + grid[i], 1.0};
        const auto a1 = steady_state_continued_fraction(chain, gain, probe);
        const std::complex<double> eps_t = root * a1;
        const std::complex<double> t = 1.0 - eps_t;
        double delay = std::numeric_limits<double>::quiet_NaN();
        try {
            delay = group_delay(chain, gain, probe, d_omega);
        } catch (const Error& err) {
            if (err.code() != Errc::ZeroTransmission) throw;
        }
        rows[i] = {grid[i], eps_t.real(), eps_t.imag(), std::abs(t), std::arg(t), delay};
    });

    CsvWriter csv(out_path(options, "spectrum.csv"),
                  {"x_mhz", "re_eps", "im_eps", "abs_t", "arg_t", "delay_us"});
    for (const auto& row : rows) {
        csv.row({row.x, row.re, row.im, row.abs_t, row.arg_t, row.delay});
    }

    auto report = base_report(scenario);
    report["effective_gain_mhz"] = gain;
    report["points"] = points;
    report["x_range_mhz"] = json::array({x_lo, x_hi});
    write_json_file(out_path(options, "spectrum.json"), report);

    if (options.write_svg) {
        std::vector<double> xs, re, im, t_sq, delay;
        for (const auto& row : rows) {
            xs.push_back(row.x);
            re.push_back(row.re);
            im.push_back(row.im);
            t_sq.push_back(row.abs_t * row.abs_t);
            delay.push_back(row.delay);
        }
        svg::write_line_plot(out_path(options, "spectrum.svg"), "Susceptibility and transmission",
                             "x [MHz]", "response",
                             {{"Re eps_T", xs, re, "#b23a3a"},
                              {"Im eps_T", xs, im, "#1f6fb2"},
                              {"|t|^2", xs, t_sq, "#2e8540"}});
        svg::write_line_plot(out_path(options, "delay.svg"), "Group delay", "x [MHz]",
                             "delay [us]", {{"delay", xs, delay, "#6b4fa0"}});
    }
}

void run_evolve(const Scenario& scenario, const CommandOptions& options) {
    double t_end = 0.0;
    if (options.t_end_us) {
        t_end = *options.t_end_us;
    } else if (scenario.t_end_us) {
        t_end = *scenario.t_end_us;
    } else {
        fail(Errc::InvalidArgument, "evolve needs a time horizon (--t-end or defaults.t_end_us)");
    }

    const auto traj = evolve(scenario.chain, scenario.gain, scenario.pump, t_end);

    const std::size_t n = scenario.chain.size();
    std::vector<std::string> columns{"t_us"};
    for (std::size_t k = 1; k <= n; ++k) {
        columns.push_back("re_a" + std::to_string(k));
        columns.push_back("im_a" + std::to_string(k));
    }
    columns.push_back("gain_mhz");

    std::size_t stride = 1;
    if (options.downsample && traj.times_us.size() > 10000) {
        stride = (traj.times_us.size() + 9999) / 10000;
    }
    CsvWriter csv(out_path(options, "trajectory.csv"), columns);
    for (std::size_t i = 0; i < traj.times_us.size(); ++i) {
        if (i % stride != 0 && i + 1 != traj.times_us.size()) continue;
        std::vector<double> row{traj.times_us[i]};
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> a = traj.amplitudes[i][static_cast<Eigen::Index>(k)];
            if (options.frame == Frame::Lab) {
                a *= std::exp(std::complex<double>(0.0, -scenario.pump.omega_p_mhz *
                                                            traj.times_us[i]));
            }
            row.push_back(a.real());
            row.push_back(a.imag());
        }
        row.push_back(traj.gain_trace_mhz[i]);
        csv.row(row);
    }

    auto report = base_report(scenario);
    report["t_end_us"] = t_end;
    report["frame"] = options.frame == Frame::Lab ? "lab" : "rotating";
    report["samples"] = traj.times_us.size();
    report["saturated_gain_mhz"] = traj.gain_trace_mhz.back();
    if (traj.stabilized_at_us) {
        report["stabilized_at_us"] = *traj.stabilized_at_us;
        const auto photons = final_photon_numbers(traj);
        auto list = json::array();
        for (Eigen::Index k = 0; k < photons.size(); ++k) list.push_back(photons[k]);
        report["final_photon_numbers"] = list;
    } else {
        report["stabilized_at_us"] = nullptr;
    }
    {
        auto final_state = json::object();
        auto amplitudes = json::array();
        for (Eigen::Index k = 0; k < traj.final.amplitudes.size(); ++k) {
            amplitudes.push_back(json::array({traj.final.amplitudes[k].real(),
                                              traj.final.amplitudes[k].imag()}));
        }
        final_state["amplitudes"] = amplitudes;
        final_state["susceptibility"] = json::array(
            {traj.final.susceptibility.real(), traj.final.susceptibility.imag()});
        final_state["transmission_sq"] = std::norm(traj.final.transmission);
        report["final"] = final_state;
    }
    write_json_file(out_path(options, "evolve.json"), report);

    if (options.write_svg) {
        std::vector<svg::Series> magnitude_series;
        static const char* colors[] = {"#b23a3a", "#1f6fb2", "#2e8540", "#6b4fa0"};
        for (std::size_t k = 0; k < n; ++k) {
            svg::Series series;
            series.name = "|a" + std::to_string(k + 1) + "|";
            series.color = colors[k % 4];
            for (std::size_t i = 0; i < traj.times_us.size(); ++i) {
                series.x.push_back(traj.times_us[i]);
                series.y.push_back(std::abs(traj.amplitudes[i][static_cast<Eigen::Index>(k)]));
            }
            magnitude_series.push_back(std::move(series));
        }
        svg::write_line_plot(out_path(options, "evolve.svg"), "Intracavity field evolution",
                             "t [us]", "|a_k| [sqrt(MHz)]", magnitude_series);
        svg::Series gain_series{"gain", traj.times_us, traj.gain_trace_mhz, "#b23a3a"};
        svg::write_line_plot(out_path(options, "gain.svg"), "Effective gain", "t [us]",
                             "kappa2(t) [MHz]", {gain_series});
    }
}

void run_stability_map(const Scenario& scenario, const CommandOptions& options) {
    const auto j1_spec = options.j1_grid ? options.j1_grid : scenario.j1_grid;
    const auto j2_spec = options.j2_grid ? options.j2_grid : scenario.j2_grid;
    if (!j1_spec || !j2_spec) {
        fail(Errc::InvalidArgument, "stability-map needs --j1-grid and --j2-grid (lo:hi:n)");
    }
    const auto j1_grid = j1_spec->values();
    const auto j2_grid = j2_spec->values();
    const double gain = scenario.unsaturated_gain();
    const auto map = stability_map(scenario.chain, gain, j1_grid, j2_grid);

    CsvWriter csv(out_path(options, "stability_map.csv"),
                  {"j1_mhz", "j2_mhz", "max_re_lambda_mhz", "label"});
    for (const auto& cell : map.cells) {
        csv.raw_row({format_double(cell.j1_mhz), format_double(cell.j2_mhz),
                     format_double(cell.max_re_lambda_mhz), regime_name(cell.label)});
    }

    auto report = base_report(scenario);
    report["gain_mhz"] = gain;
    report["j1_grid"] = json::array({j1_spec->lo, j1_spec->hi, j1_spec->n});
    report["j2_grid"] = json::array({j2_spec->lo, j2_spec->hi, j2_spec->n});
    const auto& chain = scenario.chain;
    if (gain > 0.0 && gain < chain.resonators[2].rate_mhz) {
        report["sqrt_k1k2_mhz"] = std::sqrt(chain.resonators[0].rate_mhz * gain);
        report["sqrt_k2k3_mhz"] = std::sqrt(gain * chain.resonators[2].rate_mhz);
    }
    std::size_t unstable_cells = 0;
    for (const auto& cell : map.cells) {
        if (!cell.stable) ++unstable_cells;
    }
    report["unstable_cells"] = unstable_cells;
    write_json_file(out_path(options, "stability_map.json"), report);

    if (options.write_svg) {
        std::vector<double> values;
        values.reserve(map.cells.size());
        for (const auto& cell : map.cells) values.push_back(cell.max_re_lambda_mhz);
        svg::write_heat_map(out_path(options, "stability_map.svg"),
                            "Dynamical stability (max Re lambda, MHz)", "J1 [MHz]", "J2 [MHz]",
                            j1_grid, j2_grid, values, map.boundary);
    }
}

void run_tune(const Scenario& scenario, const CommandOptions& options) {
    const auto bracket = options.bracket_mhz ? options.bracket_mhz : scenario.bracket_mhz;
    if (!bracket) fail(Errc::InvalidArgument, "tune needs --bracket LO:HI");
    double tol = options.tol ? *options.tol : scenario.tol.value_or(1e-6);

    auto report = base_report(scenario);
    if (options.tune_parameter == "j2") {
        const auto result = find_transparency_j2(scenario.chain, scenario.gain, scenario.pump,
                                                 bracket->first, bracket->second, tol);
        report["parameter"] = result.parameter_name;
        report["value_mhz"] = result.value_mhz;
        report["residual"] = result.residual;
        report["iterations"] = result.iterations;
        report["saturated_gain_mhz"] = result.saturated_gain_mhz;
    } else if (options.tune_parameter == "j1-marginal") {
        const auto& chain = scenario.chain;
        if (chain.size() != 3) fail(Errc::InvalidArgument, "j1-marginal needs a 3-resonator chain");
        const double gain = scenario.unsaturated_gain();
        const double j1 = marginal_j1(chain.resonators[0].rate_mhz, gain,
                                      chain.resonators[2].rate_mhz, chain.couplings_mhz[1],
                                      bracket->first, bracket->second, tol);
        report["parameter"] = "j1_marginal";
        report["value_mhz"] = j1;
        report["gain_mhz"] = gain;
        report["j2_mhz"] = chain.couplings_mhz[1];
    } else {
        fail(Errc::InvalidArgument, "unknown tune parameter: " + options.tune_parameter);
    }
    write_json_file(out_path(options, "tune.json"), report);
}

void run_noise(const Scenario& scenario, const CommandOptions& options) {
    // The estimate matrix carries the saturated effective gain; the gross
    // rate g2s = effective + gamma2 scales the noise drive.
    auto chain = scenario.chain;
    const auto active = chain.active_index();
    double gamma2 = active ? chain.resonators[*active].intrinsic_loss_mhz : 0.0;
    if (const auto* sat = std::get_if<SaturatingGain>(&scenario.gain)) gamma2 = sat->gamma2_mhz;
    if (options.noise_gamma2_mhz) gamma2 = *options.noise_gamma2_mhz;
    double g2s = 0.0;
    if (const auto* sat = std::get_if<SaturatingGain>(&scenario.gain)) {
        const double effective =
            saturated_fixed_point(chain, *sat, scenario.pump).g2s_mhz - sat->gamma2_mhz;
        g2s = effective + gamma2;
        if (active) chain.resonators[*active].rate_mhz = effective;
    } else {
        const double kappa2 = std::get<ConstantGain>(scenario.gain).kappa2_mhz;
        g2s = kappa2 + gamma2;
        if (active) chain.resonators[*active].rate_mhz = kappa2;
    }
    const auto estimate = noise_photon_estimates(chain, g2s, gamma2);

    auto report = base_report(scenario);
    report["g2s_mhz"] = estimate.g2s_mhz;
    auto per_mode = json::array();
    for (Eigen::Index k = 0; k < estimate.per_mode.size(); ++k) {
        per_mode.push_back(estimate.per_mode[k]);
    }
    report["per_mode"] = per_mode;
    report["selected"] = estimate.selected;
    auto eigenvalue_list = json::array();
    for (Eigen::Index k = 0; k < estimate.eigenvalues.size(); ++k) {
        eigenvalue_list.push_back(json::array(
            {estimate.eigenvalues[k].real(), estimate.eigenvalues[k].imag()}));
    }
    report["eigenvalues_mhz"] = eigenvalue_list;
    const double wavelength = scenario.wavelength_m.value_or(1550e-9);
    report["floor_power_w"] = noise_floor_power(wavelength);
    report["floor_wavelength_m"] = wavelength;
    write_json_file(out_path(options, "noise.json"), report);
}

void run_scan(const Scenario& scenario, const CommandOptions& options) {
    const auto j2_spec = options.j2_grid ? options.j2_grid : scenario.j2_grid;
    if (!j2_spec) fail(Errc::InvalidArgument, "scan needs --j2-grid LO:HI:N");
    const auto grid = j2_spec->values();
    const auto range = spectrum_range(scenario, options);
    const double half = std::max(std::abs(range.first), std::abs(range.second));
    const int points = spectrum_points(scenario, options);
    const auto rows = scan_transmission_vs_j2(scenario.chain, scenario.gain, scenario.pump, grid,
                                              half > 0 ? half : 1.0, std::max(points, 3));

    CsvWriter csv(out_path(options, "scan.csv"),
                  {"j2_mhz", "label", "t0_sq", "spec_min", "spec_max"});
    for (const auto& row : rows) {
        std::vector<std::string> cells{format_double(row.j2_mhz), regime_name(row.label)};
        if (row.transmission_center) {
            cells.push_back(format_double(*row.transmission_center));
            cells.push_back(format_double(*row.transmission_min));
            cells.push_back(format_double(*row.transmission_max));
        } else {
            cells.insert(cells.end(), {"", "", ""});
        }
        csv.raw_row(cells);
    }

    auto report = base_report(scenario);
    report["j2_grid"] = json::array({j2_spec->lo, j2_spec->hi, j2_spec->n});
    report["x_half_window_mhz"] = half > 0 ? half : 1.0;
    write_json_file(out_path(options, "scan.json"), report);
}

}  // namespace cavitytrio::cli
