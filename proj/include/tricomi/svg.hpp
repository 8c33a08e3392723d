#pragma once

// Minimal static SVG line plots; no external renderer. Log axes are applied
// by the caller through the axis kind.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tricomi {

struct PlotSeries {
    std::vector<double> x, y;
    std::string label;
};

enum class AxisKind { Linear, Log2, Log10 };

inline double axis_map(double v, AxisKind k) {
    switch (k) {
        case AxisKind::Log2: return std::log2(std::max(v, 1e-300));
        case AxisKind::Log10: return std::log10(std::max(v, 1e-300));
        default: return v;
    }
}

inline void write_svg_plot(const std::string& path, const std::vector<PlotSeries>& series,
                           const std::string& title, AxisKind xk, AxisKind yk) {
    const int W = 640, H = 420, ML = 70, MR = 20, MT = 40, MB = 50;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    bool empty = true;
    for (const auto& s : series)
        if (!s.x.empty()) empty = false;
    if (empty) {
        svg << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
            << "\" text-anchor=\"middle\" fill=\"#a00\" font-size=\"14\">no data"
            << " (empty input)</text>\n</svg>\n";
        std::ofstream(path) << svg.str();
        return;
    }

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double xv = axis_map(s.x[i], xk), yv = axis_map(s.y[i], yk);
            xlo = std::min(xlo, xv); xhi = std::max(xhi, xv);
            ylo = std::min(ylo, yv); yhi = std::max(yhi, yv);
        }
    if (xhi - xlo < 1e-12) { xhi += 0.5; xlo -= 0.5; }
    if (yhi - ylo < 1e-12) { yhi += 0.5; ylo -= 0.5; }

    auto px = [&](double v) { return ML + (axis_map(v, xk) - xlo) / (xhi - xlo) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (axis_map(v, yk) - ylo) / (yhi - ylo) * (H - MT - MB); };

    // frame + tick labels at the corners
    svg << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR << "\" height=\""
        << H - MT - MB << "\" fill=\"none\" stroke=\"#444\"/>\n";
    auto axis_label = [&](double v, AxisKind k) {
        std::ostringstream o;
        o.precision(4);
        if (k == AxisKind::Log2) o << "2^" << v;
        else if (k == AxisKind::Log10) o << "1e" << v;
        else o << v;
        return o.str();
    };
    svg << "<text x=\"" << ML << "\" y=\"" << H - MB + 18 << "\" font-size=\"11\">"
        << axis_label(xlo, xk) << "</text>\n";
    svg << "<text x=\"" << W - MR << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"end\" font-size=\"11\">" << axis_label(xhi, xk) << "</text>\n";
    svg << "<text x=\"" << ML - 6 << "\" y=\"" << H - MB << "\" text-anchor=\"end\" font-size=\"11\">"
        << axis_label(ylo, yk) << "</text>\n";
    svg << "<text x=\"" << ML - 6 << "\" y=\"" << MT + 10
        << "\" text-anchor=\"end\" font-size=\"11\">" << axis_label(yhi, yk) << "</text>\n";

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int ci = 0;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
        svg << "\"/>\n";
        if (!s.label.empty())
            svg << "<text x=\"" << ML + 10 << "\" y=\"" << MT + 16 + 14 * ci << "\" fill=\""
                << colors[ci % 5] << "\" font-size=\"12\">" << s.label << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    std::ofstream(path) << svg.str();
}

} // namespace tricomi
