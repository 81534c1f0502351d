#pragma once

#include <span>
#include <string>
#include <vector>

namespace hydro {

struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb2";
    std::span<const double> x;
    std::span<const double> y;
};

/// Self-contained SVG line chart, one file per panel. When band_halfwidth > 0
/// a shaded band of that halfwidth is drawn around the first series.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     std::span<const SvgSeries> series, double band_halfwidth = 0.0);

}  // namespace hydro
