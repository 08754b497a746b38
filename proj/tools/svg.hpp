#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cavitytrio::cli::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
};

/// Minimal static line plot: axes, ticks, legend, one polyline per series.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

/// Minimal heat map over a rectilinear grid (values row-major over x, y)
/// with an optional overlay polyline (e.g. a stability boundary).
void write_heat_map(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                    const std::vector<double>& values,
                    const std::vector<std::pair<double, double>>& overlay = {});

}  // namespace cavitytrio::cli::svg
