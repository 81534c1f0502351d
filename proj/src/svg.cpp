#include "hydro/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hydro {

namespace {

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span() const { return hi - lo; }
};

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     std::span<const SvgSeries> series, double band_halfwidth) {
    if (series.empty()) throw std::invalid_argument("write_svg_chart: no series");

    constexpr double w = 860, h = 420;
    constexpr double ml = 80, mr = 20, mt = 40, mb = 50;  // margins
    const double pw = w - ml - mr, ph = h - mt - mb;

    Extent xe, ye;
    for (const auto& s : series) {
        for (double v : s.x) xe.grow(v);
        for (double v : s.y) ye.grow(v);
    }
    if (band_halfwidth > 0.0)
        for (double v : series.front().y) {
            ye.grow(v + band_halfwidth);
            ye.grow(v - band_halfwidth);
        }
    if (!(xe.span() > 0.0)) xe.hi = xe.lo + 1.0;
    if (!(ye.span() > 0.0)) {
        ye.lo -= 0.5;
        ye.hi += 0.5;
    } else {
        const double pad = 0.06 * ye.span();
        ye.lo -= pad;
        ye.hi += pad;
    }

    const auto px = [&](double x) { return ml + (x - xe.lo) / xe.span() * pw; };
    const auto py = [&](double y) { return mt + (ye.hi - y) / ye.span() * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_svg_chart: cannot open " + path);
    out << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        w, h, w, h);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       w / 2, title);

    // Axes and ticks.
    out << fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", ml,
        mt, pw, ph);
    for (int i = 0; i <= 5; ++i) {
        const double xv = xe.lo + xe.span() * i / 5.0;
        const double yv = ye.lo + ye.span() * i / 5.0;
        out << fmt::format(
            "<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", px(xv),
            mt, mt + ph);
        out << fmt::format(
            "<line x1=\"{0}\" y1=\"{2:.1f}\" x2=\"{1}\" y2=\"{2:.1f}\" stroke=\"#ddd\"/>\n", ml,
            ml + pw, py(yv));
        out << fmt::format(
            "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n", px(xv),
            mt + ph + 16, xv);
        out << fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.5g}</text>\n",
                           ml - 6, py(yv) + 4, yv);
    }
    out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", ml + pw / 2,
                       h - 10, x_label);
    out << fmt::format(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        mt + ph / 2, mt + ph / 2, y_label);

    if (band_halfwidth > 0.0) {
        const auto& ref = series.front();
        std::string poly;
        for (std::size_t i = 0; i < ref.x.size(); ++i)
            poly += fmt::format("{:.1f},{:.1f} ", px(ref.x[i]), py(ref.y[i] + band_halfwidth));
        for (std::size_t i = ref.x.size(); i-- > 0;)
            poly += fmt::format("{:.1f},{:.1f} ", px(ref.x[i]), py(ref.y[i] - band_halfwidth));
        out << fmt::format("<polygon points=\"{}\" fill=\"#8ecf8e\" fill-opacity=\"0.35\"/>\n",
                           poly);
    }

    double legend_x = ml + 10;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += fmt::format("{:.1f},{:.1f} ", px(s.x[i]), py(s.y[i]));
        out << fmt::format(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.3\"/>\n", pts,
            s.color);
        out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" "
                           "stroke-width=\"3\"/><text x=\"{4}\" y=\"{5}\">{6}</text>\n",
                           legend_x, mt + 12, legend_x + 18, s.color, legend_x + 24, mt + 16,
                           s.label);
        legend_x += 24.0 + 8.0 * static_cast<double>(s.label.size()) + 24.0;
    }
    out << "</svg>\n";
}

}  // namespace hydro
