#pragma once

#include <string>
#include <vector>

namespace smallcell {

/// Minimal line chart: one polyline per series over a shared x grid.
struct SvgSeries {
    std::string label;
    std::vector<double> y;
};

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<double>& x,
                              const std::vector<SvgSeries>& series);

}  // namespace smallcell
