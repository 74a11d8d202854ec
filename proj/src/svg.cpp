#include "smallcell/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace smallcell {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<double>& x,
                              const std::vector<SvgSeries>& series) {
    const double width = 820, height = 520;
    const double left = 70, right = 790, top = 50, bottom = 460;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    if (!x.empty()) {
        x_min = *std::min_element(x.begin(), x.end());
        x_max = *std::max_element(x.begin(), x.end());
    }
    bool have_y = false;
    for (const auto& s : series)
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            if (!have_y) {
                y_min = y_max = v;
                have_y = true;
            }
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    if (x_max == x_min) x_max = x_min + 1;
    if (!have_y || y_max == y_min) y_max = y_min + 1;
    const auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
    const auto py = [&](double v) {
        return bottom - (v - y_min) / (y_max - y_min) * (bottom - top);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (width / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x_min + (x_max - x_min) * k / 4.0;
        const double fy = y_min + (y_max - y_min) * k / 4.0;
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << (bottom + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n";
        out << "<text x=\"" << (left - 8) << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << (width / 2) << "\" y=\"" << (height - 14)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (height / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (height / 2) << ")\">" << y_label << "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (size_t k = 0; k < x.size() && k < series[s].y.size(); ++k) {
            if (!std::isfinite(series[s].y[k])) continue;
            out << num(px(x[k])) << "," << num(py(series[s].y[k])) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << (right - 150) << "\" y=\"" << (top + 18 * s + 4)
            << "\" font-size=\"12\" fill=\"" << color << "\">" << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace smallcell
