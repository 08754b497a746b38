#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cavitytrio/errors.hpp"

namespace cavitytrio::cli::svg {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 30.0, kTop = 40.0, kBottom = 55.0;

struct Axis {
    double lo = 0.0, hi = 1.0;

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

void open_figure(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << kWidth / 2 << "' y='22' text-anchor='middle' "
        << "font-family='sans-serif' font-size='15'>" << title << "</text>\n";
}

void draw_axes(std::ofstream& out, const Axis& ax, const Axis& ay, const std::string& x_label,
               const std::string& y_label) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out << "<rect x='" << x0 << "' y='" << y1 << "' width='" << x1 - x0 << "' height='"
        << y0 - y1 << "' fill='none' stroke='#333'/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = i / 5.0;
        const double px = x0 + fx * (x1 - x0);
        const double py = y0 - fx * (y0 - y1);
        out << "<line x1='" << px << "' y1='" << y0 << "' x2='" << px << "' y2='" << y0 + 5
            << "' stroke='#333'/>\n"
            << "<text x='" << px << "' y='" << y0 + 18
            << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
            << num(ax.lo + fx * (ax.hi - ax.lo)) << "</text>\n"
            << "<line x1='" << x0 - 5 << "' y1='" << py << "' x2='" << x0 << "' y2='" << py
            << "' stroke='#333'/>\n"
            << "<text x='" << x0 - 8 << "' y='" << py + 4
            << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
            << num(ay.lo + fx * (ay.hi - ay.lo)) << "</text>\n";
    }
    out << "<text x='" << (x0 + x1) / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-family='sans-serif' font-size='13'>" << x_label
        << "</text>\n"
        << "<text x='18' y='" << (y0 + y1) / 2
        << "' text-anchor='middle' font-family='sans-serif' font-size='13' "
        << "transform='rotate(-90 18 " << (y0 + y1) / 2 << ")'>" << y_label << "</text>\n";
}

}  // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out) fail(Errc::InvalidArgument, "cannot open output file: " + path);

    Axis ax{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Axis ay = ax;
    for (const auto& s : series) {
        for (double v : s.x) ax.include(v);
        for (double v : s.y) ay.include(v);
    }
    ax.finalize();
    ay.finalize();

    open_figure(out, title);
    draw_axes(out, ax, ay, x_label, y_label);

    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.4' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            const double px = x0 + ax.frac(s.x[i]) * (x1 - x0);
            const double py = y0 - ay.frac(s.y[i]) * (y0 - y1);
            out << px << "," << py << " ";
        }
        out << "'/>\n";
    }
    double legend_y = kTop + 14.0;
    for (const auto& s : series) {
        out << "<line x1='" << x1 - 130 << "' y1='" << legend_y << "' x2='" << x1 - 105
            << "' y2='" << legend_y << "' stroke='" << s.color << "' stroke-width='2'/>\n"
            << "<text x='" << x1 - 100 << "' y='" << legend_y + 4
            << "' font-family='sans-serif' font-size='11'>" << s.name << "</text>\n";
        legend_y += 16.0;
    }
    out << "</svg>\n";
}

void write_heat_map(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                    const std::vector<double>& values,
                    const std::vector<std::pair<double, double>>& overlay) {
    std::ofstream out(path);
    if (!out) fail(Errc::InvalidArgument, "cannot open output file: " + path);

    Axis ax{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    Axis ay = ax;
    for (double v : x_grid) ax.include(v);
    for (double v : y_grid) ay.include(v);
    ax.finalize();
    ay.finalize();

    double vmax = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
    }
    if (vmax == 0.0) vmax = 1.0;

    open_figure(out, title);
    draw_axes(out, ax, ay, x_label, y_label);

    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    const double cell_w = (x1 - x0) / static_cast<double>(x_grid.size());
    const double cell_h = (y0 - y1) / static_cast<double>(y_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        for (std::size_t j = 0; j < y_grid.size(); ++j) {
            const double v = values[i * y_grid.size() + j];
            // Diverging palette: blue (negative) through white to red.
            const double u = std::clamp(v / vmax, -1.0, 1.0);
            const int r = static_cast<int>(u > 0 ? 255 : 255 * (1.0 + u));
            const int b = static_cast<int>(u < 0 ? 255 : 255 * (1.0 - u));
            const int g = static_cast<int>(255 * (1.0 - std::abs(u)));
            const double px = x0 + ax.frac(x_grid[i]) * (x1 - x0) - cell_w / 2;
            const double py = y0 - ay.frac(y_grid[j]) * (y0 - y1) - cell_h / 2;
            out << "<rect x='" << px << "' y='" << py << "' width='" << cell_w << "' height='"
                << cell_h << "' fill='rgb(" << r << "," << g << "," << b << ")'/>\n";
        }
    }
    if (!overlay.empty()) {
        out << "<polyline fill='none' stroke='black' stroke-width='1.8' stroke-dasharray='6,3' "
            << "points='";
        for (const auto& [x, y] : overlay) {
            if (y < ay.lo || y > ay.hi) continue;
            out << x0 + ax.frac(x) * (x1 - x0) << "," << y0 - ay.frac(y) * (y0 - y1) << " ";
        }
        out << "'/>\n";
    }
    out << "</svg>\n";
}

}  // namespace cavitytrio::cli::svg
