#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "scenario.hpp"

#ifndef CAVITYTRIO_VERSION
#define CAVITYTRIO_VERSION "0.0.0"
#endif

namespace {

using namespace cavitytrio;
using namespace cavitytrio::cli;

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    bool write_svg = false;
    bool downsample = false;
    std::string frame = "rotating";
    std::string x_range, j1_grid, j2_grid, bracket;
    int points = 0;
    double t_end = -1.0;
    double tol = 0.0;
    std::string tune_parameter = "j2";
    double noise_gamma2 = -1.0;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file (JSON)");
    cmd->add_option("--preset", args.preset, "Named scenario preset");
    cmd->add_option("--override", args.overrides,
                    "Config override as JSON-pointer=value, e.g. /couplings_mhz/1=0.45");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_flag("--svg", args.write_svg, "Also write SVG plots");
    cmd->add_option("--frame", args.frame, "Amplitude frame for trajectory output")
        ->check(CLI::IsMember({"rotating", "lab"}));
}

/// Applies `/json/pointer=value` overrides to the scenario document.
json apply_overrides(json document, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || item.empty() || item[0] != '/') {
            fail(Errc::InvalidArgument, "override must be /pointer=value: " + item);
        }
        json value;
        try {
            value = json::parse(item.substr(eq + 1));
        } catch (const json::parse_error&) {
            value = item.substr(eq + 1);  // plain string
        }
        try {
            document[json::json_pointer(item.substr(0, eq))] = value;
        } catch (const json::exception& err) {
            fail(Errc::InvalidArgument, "bad override '" + item + "': " + err.what());
        }
    }
    return document;
}

Scenario resolve_scenario(const CommonArgs& args) {
    json document;
    if (!args.preset.empty() && !args.config_path.empty()) {
        fail(Errc::InvalidArgument, "give either --preset or --config, not both");
    }
    if (!args.preset.empty()) {
        document = preset_document(args.preset);
    } else if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) fail(Errc::InvalidArgument, "cannot open config file: " + args.config_path);
        try {
            document = json::parse(in);
        } catch (const json::parse_error& err) {
            fail(Errc::InvalidArgument, std::string("config parse failure: ") + err.what());
        }
    } else {
        fail(Errc::InvalidArgument, "a scenario is required (--preset or --config)");
    }
    return parse_scenario(apply_overrides(std::move(document), args.overrides));
}

CommandOptions resolve_options(const CommonArgs& args) {
    CommandOptions options;
    options.out_dir = args.out_dir;
    options.write_svg = args.write_svg;
    options.downsample = args.downsample;
    options.frame = args.frame == "lab" ? Frame::Lab : Frame::Rotating;
    if (!args.x_range.empty()) options.x_range_mhz = parse_range(args.x_range);
    if (!args.j1_grid.empty()) options.j1_grid = parse_grid(args.j1_grid);
    if (!args.j2_grid.empty()) options.j2_grid = parse_grid(args.j2_grid);
    if (!args.bracket.empty()) options.bracket_mhz = parse_range(args.bracket);
    if (args.points > 0) options.points = args.points;
    if (args.t_end >= 0.0) options.t_end_us = args.t_end;
    if (args.tol > 0.0) options.tol = args.tol;
    options.tune_parameter = args.tune_parameter;
    if (args.noise_gamma2 >= 0.0) options.noise_gamma2_mhz = args.noise_gamma2;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled-resonator transparency engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CAVITYTRIO_VERSION);

    CommonArgs spectrum_args, evolve_args, map_args, tune_args, noise_args, scan_args;

    auto* spectrum = app.add_subcommand("spectrum", "Susceptibility and transmission spectrum");
    add_common_flags(spectrum, spectrum_args);
    spectrum->add_option("--x-range", spectrum_args.x_range, "Detuning range LO:HI [MHz]");
    spectrum->add_option("--points", spectrum_args.points, "Grid point count");

    auto* evolve_cmd = app.add_subcommand("evolve", "Time evolution of the intracavity fields");
    add_common_flags(evolve_cmd, evolve_args);
    evolve_cmd->add_option("--t-end", evolve_args.t_end, "Integration horizon [us]");
    evolve_cmd->add_flag("--downsample", evolve_args.downsample,
                         "Cap the trajectory CSV at 10k rows");

    auto* map_cmd = app.add_subcommand("stability-map", "Regime map over the two couplings");
    add_common_flags(map_cmd, map_args);
    map_cmd->add_option("--j1-grid", map_args.j1_grid, "J1 grid LO:HI:N [MHz]");
    map_cmd->add_option("--j2-grid", map_args.j2_grid, "J2 grid LO:HI:N [MHz]");

    auto* tune_cmd = app.add_subcommand("tune", "Locate an operating point");
    add_common_flags(tune_cmd, tune_args);
    tune_cmd->add_option("--parameter", tune_args.tune_parameter, "j2 or j1-marginal")
        ->check(CLI::IsMember({"j2", "j1-marginal"}));
    tune_cmd->add_option("--bracket", tune_args.bracket, "Search bracket LO:HI [MHz]");
    tune_cmd->add_option("--tol", tune_args.tol, "Coupling tolerance [MHz]");

    auto* noise_cmd = app.add_subcommand("noise", "Gain-noise photon estimate");
    add_common_flags(noise_cmd, noise_args);
    noise_cmd->add_option("--gamma2", noise_args.noise_gamma2,
                          "Assumed active-resonator damping for the noise bookkeeping [MHz]");

    auto* scan_cmd = app.add_subcommand("scan", "Transmission scan across a J2 grid");
    add_common_flags(scan_cmd, scan_args);
    scan_cmd->add_option("--j2-grid", scan_args.j2_grid, "J2 grid LO:HI:N [MHz]");
    scan_cmd->add_option("--x-range", scan_args.x_range, "Spectrum window LO:HI [MHz]");
    scan_cmd->add_option("--points", scan_args.points, "Window point count");

    auto* presets_cmd = app.add_subcommand("presets", "List or show scenario presets");
    std::string show_preset;
    presets_cmd->add_option("--show", show_preset, "Print the named preset document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (presets_cmd->parsed()) {
            if (!show_preset.empty()) {
                std::cout << preset_document(show_preset).dump(2) << "\n";
            } else {
                for (const auto& name : preset_names()) {
                    std::cout << name << "\n";
                }
            }
            return 0;
        }
        if (spectrum->parsed()) {
            run_spectrum(resolve_scenario(spectrum_args), resolve_options(spectrum_args));
        } else if (evolve_cmd->parsed()) {
            run_evolve(resolve_scenario(evolve_args), resolve_options(evolve_args));
        } else if (map_cmd->parsed()) {
            run_stability_map(resolve_scenario(map_args), resolve_options(map_args));
        } else if (tune_cmd->parsed()) {
            run_tune(resolve_scenario(tune_args), resolve_options(tune_args));
        } else if (noise_cmd->parsed()) {
            run_noise(resolve_scenario(noise_args), resolve_options(noise_args));
        } else if (scan_cmd->parsed()) {
            run_scan(resolve_scenario(scan_args), resolve_options(scan_args));
        }
        return 0;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_category(err.code());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 4;
    }
}
