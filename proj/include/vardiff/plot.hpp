#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vardiff/fields.hpp"

namespace vardiff {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart; the data it draws is always written as CSV too.
std::string line_plot_svg(const std::vector<LineSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label, bool log_x);

/// Standalone SVG heatmap with a viridis-like ramp between min and max.
std::string heatmap_svg(const Grid& g, const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace vardiff
