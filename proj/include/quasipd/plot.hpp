#pragma once

#include <string>
#include <vector>

#include "quasipd/series.hpp"

namespace quasipd {

struct PlotLine {
    std::string label;
    MonthlySeries series;
};

/// Self-contained SVG line chart: months on the x-axis, one <polyline> per line.
/// Missing months are skipped.
std::string render_svg_line_chart(const std::vector<PlotLine>& lines, const std::string& title);

/// Whitespace-separated columns for gnuplot: month, running index, one column
/// per line ("NaN" where missing).
std::string render_gnuplot_data(const std::vector<PlotLine>& lines);

}  // namespace quasipd
