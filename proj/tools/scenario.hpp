#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cavitytrio/model.hpp"

namespace cavitytrio::cli {

using json = nlohmann::ordered_json;

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    std::vector<double> values() const;
};

/// One scenario document: the physical system plus optional per-command
/// defaults. Unknown keys anywhere in the document are configuration errors.
struct Scenario {
    ResonatorChain chain;
    PumpDrive pump;
    GainModel gain{ConstantGain{}};
    std::optional<double> wavelength_m;

    std::optional<double> t_end_us;
    std::optional<std::pair<double, double>> x_range_mhz;
    std::optional<int> points;
    std::optional<GridSpec> j1_grid;
    std::optional<GridSpec> j2_grid;
    std::optional<std::pair<double, double>> bracket_mhz;
    std::optional<double> tol;

    json echo;  // the parsed document, for sidecar reports

    /// Effective gain at vanishing intensity (constant kappa2, or
    /// kappa20 - gamma2 for the saturating law).
    double unsaturated_gain() const { return unsaturated_effective_gain(gain); }
};

Scenario parse_scenario(const json& document);
Scenario load_scenario_file(const std::string& path);

/// "lo:hi" and "lo:hi:n" flag forms.
std::pair<double, double> parse_range(const std::string& text);
GridSpec parse_grid(const std::string& text);

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
json preset_document(const std::string& name);

}  // namespace cavitytrio::cli
