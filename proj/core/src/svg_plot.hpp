#pragma once

#include <string>
#include <vector>

namespace hyrb {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal self-contained SVG line chart with markers, ticks, and a legend.
/// log_y uses decade ticks and drops non-positive values.  Throws
/// std::runtime_error when the file cannot be written.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_y,
                     const std::vector<PlotSeries>& series);

}  // namespace hyrb
