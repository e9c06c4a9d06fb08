#include "rsimle/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace rsimle {

SvgWindow fit_window(const std::vector<const Tensor2*>& point_sets, double margin) {
  SvgWindow w;
  bool any = false;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (const Tensor2* points : point_sets) {
    if (points == nullptr || points->rows() == 0) continue;
    for (std::size_t r = 0; r < points->rows(); ++r) {
      const double x = (*points)(r, 0);
      const double y = (*points)(r, 1);
      if (!any) {
        lo_x = hi_x = x;
        lo_y = hi_y = y;
        any = true;
      } else {
        lo_x = std::min(lo_x, x);
        hi_x = std::max(hi_x, x);
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
      }
    }
  }
  if (!any) return w;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
  const double pad = margin * span;
  w.min_x = lo_x - pad;
  w.max_x = hi_x + pad;
  w.min_y = lo_y - pad;
  w.max_y = hi_y + pad;
  return w;
}

std::string color_for_index(std::size_t i, std::size_t n) {
  const int hue = static_cast<int>(360.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1)));
  char buf[40];
  std::snprintf(buf, sizeof(buf), "hsl(%d, 70%%, 45%%)", hue);
  return buf;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void write_marker(std::ofstream& out, ScatterSeries::Marker marker, double cx, double cy,
                  double size, const std::string& color) {
  switch (marker) {
    case ScatterSeries::Marker::kCircle:
      out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(size)
          << "\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
      break;
    case ScatterSeries::Marker::kSquare:
      out << "<rect x=\"" << fmt(cx - size) << "\" y=\"" << fmt(cy - size) << "\" width=\""
          << fmt(2 * size) << "\" height=\"" << fmt(2 * size) << "\" fill=\"" << color << "\"/>\n";
      break;
    case ScatterSeries::Marker::kStar: {
      out << "<polygon points=\"";
      for (int p = 0; p < 10; ++p) {
        const double r = (p % 2 == 0) ? 1.6 * size : 0.64 * size;
        const double ang = -0.5 * std::numbers::pi + p * std::numbers::pi / 5.0;
        out << fmt(cx + r * std::cos(ang)) << "," << fmt(cy + r * std::sin(ang))
            << (p == 9 ? "" : " ");
      }
      out << "\" fill=\"" << color << "\"/>\n";
      break;
    }
  }
}

}  // namespace

void write_scatter_svg(const std::string& path, const SvgWindow& window,
                       const std::vector<ScatterSeries>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_scatter_svg: cannot open " + path);

  const double span_x = window.max_x - window.min_x;
  const double span_y = window.max_y - window.min_y;
  if (!(span_x > 0.0) || !(span_y > 0.0)) {
    throw std::invalid_argument("write_scatter_svg: window is empty");
  }
  const auto to_px_x = [&](double x) {
    return (x - window.min_x) / span_x * window.width;
  };
  const auto to_px_y = [&](double y) {
    // The SVG y axis grows downward; flip so plots read the usual way up.
    return (window.max_y - y) / span_y * window.height;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << window.width << "\" height=\""
      << window.height << "\" viewBox=\"0 0 " << window.width << " " << window.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!window.title.empty()) {
    out << "<text x=\"10\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << window.title
        << "</text>\n";
  }

  for (const ScatterSeries& s : series) {
    if (s.points.rows() > 0 && s.points.cols() != 2) {
      throw std::invalid_argument("write_scatter_svg: series '" + s.label + "' is not 2D");
    }
    for (std::size_t r = 0; r < s.points.rows(); ++r) {
      write_marker(out, s.marker, to_px_x(s.points(r, 0)), to_px_y(s.points(r, 1)), s.size,
                   s.color);
    }
  }

  // Legend, top-right.
  double ly = 18.0;
  for (const ScatterSeries& s : series) {
    if (s.label.empty()) continue;
    write_marker(out, s.marker, window.width - 120.0, ly - 4.0, 4.0, s.color);
    out << "<text x=\"" << fmt(window.width - 108.0) << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    ly += 16.0;
  }

  out << "</svg>\n";
  if (!out) throw std::runtime_error("write_scatter_svg: write failed for " + path);
}

}  // namespace rsimle
