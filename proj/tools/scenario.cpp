#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cavitytrio::cli {

namespace {

[[noreturn]] void config_error(const std::string& message) {
    fail(Errc::InvalidArgument, message);
}

void require_keys(const json& object, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!object.is_object()) config_error(where + " must be an object");
    for (const auto& item : object.items()) {
        if (!allowed.count(item.key())) {
            config_error("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number_at(const json& object, const std::string& key, const std::string& where) {
    if (!object.contains(key)) config_error(where + " is missing '" + key + "'");
    const auto& value = object.at(key);
    if (!value.is_number()) config_error(where + "." + key + " must be a number");
    return value.get<double>();
}

Resonator parse_resonator(const json& node, std::size_t index) {
    const std::string where = "resonators[" + std::to_string(index + 1) + "]";
    require_keys(node, where, {"omega_mhz", "role", "rate_mhz", "intrinsic_loss_mhz"});
    Resonator r;
    r.omega_mhz = number_at(node, "omega_mhz", where);
    if (!node.contains("role")) config_error(where + " is missing 'role'");
    const std::string role = node.at("role").get<std::string>();
    if (role == "passive") {
        r.role = Role::Passive;
    } else if (role == "active") {
        r.role = Role::Active;
    } else {
        config_error(where + ".role must be 'passive' or 'active'");
    }
    if (node.contains("rate_mhz")) r.rate_mhz = number_at(node, "rate_mhz", where);
    if (node.contains("intrinsic_loss_mhz")) {
        r.intrinsic_loss_mhz = number_at(node, "intrinsic_loss_mhz", where);
    }
    return r;
}

}  // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < n; ++i) {
        out.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return out;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) config_error("range must be 'lo:hi': " + text);
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        config_error("range must be numeric 'lo:hi': " + text);
    }
}

GridSpec parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        config_error("grid must be 'lo:hi:n': " + text);
    }
    GridSpec grid;
    try {
        grid.lo = std::stod(text.substr(0, first));
        grid.hi = std::stod(text.substr(first + 1, second - first - 1));
        grid.n = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        config_error("grid must be numeric 'lo:hi:n': " + text);
    }
    if (grid.n < 1) config_error("grid point count must be >= 1");
    return grid;
}

Scenario parse_scenario(const json& document) {
    require_keys(document, "scenario",
                 {"resonators", "couplings_mhz", "kappa_ex_mhz", "pump", "gain", "defaults"});
    Scenario scenario;
    scenario.echo = document;

    if (!document.contains("resonators") || !document.at("resonators").is_array()) {
        config_error("scenario needs a 'resonators' array");
    }
    const auto& resonators = document.at("resonators");
    for (std::size_t k = 0; k < resonators.size(); ++k) {
        scenario.chain.resonators.push_back(parse_resonator(resonators[k], k));
    }

    if (!document.contains("couplings_mhz") || !document.at("couplings_mhz").is_array()) {
        config_error("scenario needs a 'couplings_mhz' array");
    }
    for (const auto& value : document.at("couplings_mhz")) {
        if (!value.is_number()) config_error("couplings_mhz entries must be numbers");
        scenario.chain.couplings_mhz.push_back(value.get<double>());
    }
    scenario.chain.kappa_ex_mhz = number_at(document, "kappa_ex_mhz", "scenario");

    // Gain model first: the active resonator's rate may be derived from it.
    if (!document.contains("gain")) config_error("scenario needs a 'gain' object");
    const auto& gain_node = document.at("gain");
    require_keys(gain_node, "gain", {"constant", "saturating"});
    if (gain_node.contains("constant") == gain_node.contains("saturating")) {
        config_error("gain must have exactly one of 'constant' or 'saturating'");
    }
    if (gain_node.contains("constant")) {
        const auto& node = gain_node.at("constant");
        require_keys(node, "gain.constant", {"kappa2_mhz"});
        scenario.gain = ConstantGain{number_at(node, "kappa2_mhz", "gain.constant")};
    } else {
        const auto& node = gain_node.at("saturating");
        require_keys(node, "gain.saturating", {"kappa20_mhz", "i_s", "gamma2_mhz"});
        SaturatingGain sat;
        sat.kappa20_mhz = number_at(node, "kappa20_mhz", "gain.saturating");
        sat.saturation_intensity = number_at(node, "i_s", "gain.saturating");
        if (node.contains("gamma2_mhz")) {
            sat.gamma2_mhz = number_at(node, "gamma2_mhz", "gain.saturating");
        }
        scenario.gain = sat;
    }
    validate_gain(scenario.gain);

    // Fill the active resonator's bookkeeping fields from the gain model.
    for (std::size_t k = 0; k < scenario.chain.resonators.size(); ++k) {
        auto& r = scenario.chain.resonators[k];
        if (r.role != Role::Active) continue;
        const double derived = scenario.unsaturated_gain();
        if (resonators[k].contains("rate_mhz")) {
            if (std::abs(r.rate_mhz - derived) > 1e-12 * std::max(1.0, std::abs(derived))) {
                config_error("active resonator rate_mhz conflicts with the gain model");
            }
        } else {
            r.rate_mhz = derived;
        }
        if (!resonators[k].contains("intrinsic_loss_mhz")) {
            r.intrinsic_loss_mhz = gamma2_mhz(scenario.gain);
        }
    }

    if (!document.contains("pump")) config_error("scenario needs a 'pump' object");
    const auto& pump_node = document.at("pump");
    require_keys(pump_node, "pump",
                 {"omega_p_mhz", "detuning_mhz", "amplitude_sqrt_mhz", "power_watts",
                  "wavelength_m"});
    if (pump_node.contains("omega_p_mhz") == pump_node.contains("detuning_mhz")) {
        config_error("pump must have exactly one of 'omega_p_mhz' or 'detuning_mhz'");
    }
    double omega_p = 0.0;
    if (pump_node.contains("omega_p_mhz")) {
        omega_p = number_at(pump_node, "omega_p_mhz", "pump");
    } else {
        omega_p = scenario.chain.omega_ref_mhz() + number_at(pump_node, "detuning_mhz", "pump");
    }
    if (pump_node.contains("wavelength_m")) {
        scenario.wavelength_m = number_at(pump_node, "wavelength_m", "pump");
    }
    if (pump_node.contains("amplitude_sqrt_mhz") == pump_node.contains("power_watts")) {
        config_error("pump must have exactly one of 'amplitude_sqrt_mhz' or 'power_watts'");
    }
    if (pump_node.contains("amplitude_sqrt_mhz")) {
        scenario.pump = PumpDrive{omega_p, number_at(pump_node, "amplitude_sqrt_mhz", "pump")};
        if (scenario.pump.amplitude_sqrt_mhz < 0.0) {
            config_error("pump amplitude must be >= 0");
        }
    } else {
        if (!scenario.wavelength_m) {
            config_error("pump power requires 'wavelength_m'");
        }
        scenario.pump = PumpDrive::from_power(
            omega_p, number_at(pump_node, "power_watts", "pump"), *scenario.wavelength_m);
    }

    if (document.contains("defaults")) {
        const auto& defaults = document.at("defaults");
        require_keys(defaults, "defaults",
                     {"t_end_us", "x_range", "points", "j1_grid", "j2_grid", "bracket", "tol"});
        if (defaults.contains("t_end_us")) {
            scenario.t_end_us = number_at(defaults, "t_end_us", "defaults");
        }
        if (defaults.contains("x_range")) {
            scenario.x_range_mhz = parse_range(defaults.at("x_range").get<std::string>());
        }
        if (defaults.contains("points")) {
            scenario.points = static_cast<int>(number_at(defaults, "points", "defaults"));
        }
        if (defaults.contains("j1_grid")) {
            scenario.j1_grid = parse_grid(defaults.at("j1_grid").get<std::string>());
        }
        if (defaults.contains("j2_grid")) {
            scenario.j2_grid = parse_grid(defaults.at("j2_grid").get<std::string>());
        }
        if (defaults.contains("bracket")) {
            scenario.bracket_mhz = parse_range(defaults.at("bracket").get<std::string>());
        }
        if (defaults.contains("tol")) {
            scenario.tol = number_at(defaults, "tol", "defaults");
        }
    }

    if (auto violation = validate_chain(scenario.chain)) {
        throw Error(violation->code, violation->detail);
    }
    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file: " + path);
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& err) {
        config_error("config parse failure: " + std::string(err.what()));
    }
    return parse_scenario(document);
}

namespace {

json trio_document(double kappa1, const json& gain, double kappa3, double j1, double j2,
                   const json& pump, const json& defaults) {
    json doc;
    doc["resonators"] = json::array({
        json{{"omega_mhz", 0.0}, {"role", "passive"}, {"rate_mhz", kappa1},
             {"intrinsic_loss_mhz", kappa1 / 2.0}},
        json{{"omega_mhz", 0.0}, {"role", "active"}},
        json{{"omega_mhz", 0.0}, {"role", "passive"}, {"rate_mhz", kappa3}},
    });
    doc["couplings_mhz"] = json::array({j1, j2});
    doc["kappa_ex_mhz"] = kappa1 / 2.0;
    doc["pump"] = pump;
    doc["gain"] = gain;
    if (!defaults.empty()) doc["defaults"] = defaults;
    return doc;
}

json constant(double kappa2) { return json{{"constant", {{"kappa2_mhz", kappa2}}}}; }

json saturating(double kappa20, double i_s, double gamma2 = 0.0) {
    return json{{"saturating",
                 {{"kappa20_mhz", kappa20}, {"i_s", i_s}, {"gamma2_mhz", gamma2}}}};
}

json resonant_pump(double amplitude, std::optional<double> wavelength = std::nullopt) {
    json pump{{"detuning_mhz", 0.0}, {"amplitude_sqrt_mhz", amplitude}};
    if (wavelength) pump["wavelength_m"] = *wavelength;
    return pump;
}

const std::vector<std::pair<std::string, json>>& preset_table() {
    static const std::vector<std::pair<std::string, json>> table = [] {
        std::vector<std::pair<std::string, json>> presets;
        // Window-center transparency of the tuned chain.
        presets.emplace_back("Fig1-inset",
                             trio_document(10.0, constant(0.2), 5.0, 2.0, 1.0,
                                           resonant_pump(1.0),
                                           json{{"x_range", "-3:3"}, {"points", 2001}}));
        // Saturating-gain evolution at strong drive.
        presets.emplace_back("Fig1b",
                             trio_document(10.0, saturating(0.2, 1e8), 5.0, 20.0, 1.0,
                                           resonant_pump(1e4, 1550e-9),
                                           json{{"t_end_us", 30.0}}));
        // Window-center response against the tuned-coupling diagonal.
        presets.emplace_back("Fig2a",
                             trio_document(20.0, constant(0.2), 5.0, 10.0, 1.0,
                                           resonant_pump(1.0),
                                           json{{"x_range", "-15:15"}, {"points", 1001},
                                                {"j2_grid", "0.2:3:57"}}));
        // Absorptive response vs detuning at a representative J1.
        presets.emplace_back("Fig2b",
                             trio_document(20.0, constant(0.05), 20.0, 2.0, 1.0,
                                           resonant_pump(1.0),
                                           json{{"x_range", "-2:2"}, {"points", 2001}}));
        // Hertz-scale window, slow light.
        presets.emplace_back("Fig3a",
                             trio_document(20.0, constant(0.01), 20.0, 0.01,
                                           std::sqrt(0.01 * 20.0), resonant_pump(1.0),
                                           json{{"x_range", "-2.5e-5:2.5e-5"},
                                                {"points", 2001}}));
        // Gain above the end loss, fast light.
        presets.emplace_back("Fig3b",
                             trio_document(10.0, constant(1.0), 0.1, 4.0, std::sqrt(0.1),
                                           resonant_pump(1.0),
                                           json{{"x_range", "-1.5:1.5"}, {"points", 2001}}));
        // Output tuning across the transparency coupling.
        presets.emplace_back("Fig4",
                             trio_document(20.0, constant(0.06), 6.0, 1.0, 0.6,
                                           resonant_pump(1.0),
                                           json{{"x_range", "-1:1"}, {"points", 2001},
                                                {"j2_grid", "0.25:1:76"}}));
        // Saturation-intensity, initial-gain and coupling variants of the
        // settling study.
        presets.emplace_back("FigS1a",
                             trio_document(2.0, saturating(0.1, 1e6), 1.0, 4.0, std::sqrt(0.1),
                                           resonant_pump(1e4),
                                           json{{"t_end_us", 200.0}}));
        presets.emplace_back("FigS1b",
                             trio_document(2.0, saturating(0.2, 1e7), 1.0, 4.0, std::sqrt(0.2),
                                           resonant_pump(1e4),
                                           json{{"t_end_us", 200.0}}));
        presets.emplace_back("FigS1c",
                             trio_document(2.0, saturating(0.1, 1e7), 1.0, 2.0, std::sqrt(0.1),
                                           resonant_pump(1e4),
                                           json{{"t_end_us", 300.0}}));
        // Stability regimes over the two couplings.
        presets.emplace_back("FigS2a",
                             trio_document(40.0, constant(0.001), 10.0, 0.1, 0.1,
                                           resonant_pump(1.0),
                                           json{{"j1_grid", "0.005:0.4:80"},
                                                {"j2_grid", "0.005:0.2:80"}}));
        // Marginal first coupling at gain above the end loss.
        presets.emplace_back("FigS2b",
                             trio_document(10.0, constant(1.0), 0.1, 3.5, std::sqrt(0.1),
                                           resonant_pump(1.0),
                                           json{{"bracket", "0.5:10"}, {"tol", 1e-4}}));
        // Numeric relocation of the transparency coupling under saturation.
        presets.emplace_back("AppendixA-tuning",
                             trio_document(2.0, saturating(0.01, 1e8), 1.0, 10.0, 0.1,
                                           resonant_pump(1e4),
                                           json{{"bracket", "0.05:0.2"}, {"tol", 1e-6}}));
        return presets;
    }();
    return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, doc] : preset_table()) out.push_back(name);
        return out;
    }();
    return names;
}

bool is_preset(const std::string& name) {
    for (const auto& [key, doc] : preset_table()) {
        if (key == name) return true;
    }
    return false;
}

json preset_document(const std::string& name) {
    for (const auto& [key, doc] : preset_table()) {
        if (key == name) return doc;
    }
    fail(Errc::InvalidArgument, "unknown preset: " + name);
}

}  // namespace cavitytrio::cli
