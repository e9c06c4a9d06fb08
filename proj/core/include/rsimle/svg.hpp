#pragma once

#include <string>
#include <vector>

#include "rsimle/tensor.hpp"

namespace rsimle {

// Data-space viewport and canvas size for a scatter plot.
struct SvgWindow {
  double min_x = -1.5, max_x = 1.5;
  double min_y = -1.5, max_y = 1.5;
  int width = 640, height = 640;
  std::string title;
};

// One plotted point set.  Sizes are in pixels.
struct ScatterSeries {
  enum class Marker { kSquare, kCircle, kStar };

  Tensor2 points;  // n x 2
  Marker marker = Marker::kCircle;
  std::string color = "#1f77b4";
  double size = 4.0;
  std::string label;
};

// Viewport that fits every listed point set with a relative margin.
SvgWindow fit_window(const std::vector<const Tensor2*>& point_sets, double margin = 0.1);

// Distinct fully-saturated color for index i of n, as an SVG color string.
std::string color_for_index(std::size_t i, std::size_t n);

void write_scatter_svg(const std::string& path, const SvgWindow& window,
                       const std::vector<ScatterSeries>& series);

}  // namespace rsimle
