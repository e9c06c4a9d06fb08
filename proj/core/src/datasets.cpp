#include "rsimle/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsimle/errors.hpp"
#include "rsimle/rng.hpp"

namespace rsimle {

ToyShape toy_shape_from_string(std::string_view name) {
  if (name == "infinity_symbol") return ToyShape::kInfinitySymbol;
  if (name == "ring") return ToyShape::kRing;
  if (name == "grid") return ToyShape::kGrid;
  if (name == "two_clusters") return ToyShape::kTwoClusters;
  if (name == "custom_csv") return ToyShape::kCustomCsv;
  throw ConfigError("unknown dataset shape '" + std::string(name) + "'");
}

std::string_view to_string(ToyShape shape) {
  switch (shape) {
    case ToyShape::kInfinitySymbol: return "infinity_symbol";
    case ToyShape::kRing: return "ring";
    case ToyShape::kGrid: return "grid";
    case ToyShape::kTwoClusters: return "two_clusters";
    case ToyShape::kCustomCsv: return "custom_csv";
  }
  throw std::logic_error("to_string(ToyShape): unreachable");
}

namespace {

// Figure-eight curve (lemniscate), parameter spread evenly over one period.
// The half-offset keeps the parameterization symmetric and avoids placing
// two points on the self-intersection at the origin.
Tensor2 make_infinity_symbol(std::size_t n) {
  Tensor2 out(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta =
        2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double denom = 1.0 + std::sin(theta) * std::sin(theta);
    out(i, 0) = std::cos(theta) / denom;
    out(i, 1) = std::sin(theta) * std::cos(theta) / denom;
  }
  return out;
}

Tensor2 make_ring(std::size_t n) {
  Tensor2 out(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    out(i, 0) = std::cos(theta);
    out(i, 1) = std::sin(theta);
  }
  return out;
}

// Near-square lattice over [-1, 1]^2, row-major from (-1, -1).  n = 4 gives
// exactly the four corners.
Tensor2 make_grid(std::size_t n) {
  std::size_t side = 1;
  while (side * side < n) ++side;
  Tensor2 out(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gx = i % side;
    const std::size_t gy = i / side;
    out(i, 0) = side == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(gx) / static_cast<double>(side - 1);
    out(i, 1) = side == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(gy) / static_cast<double>(side - 1);
  }
  return out;
}

// Two small rings of points around (-0.75, 0) and (0.75, 0); odd point
// counts put the extra point in the left cluster.
Tensor2 make_two_clusters(std::size_t n) {
  constexpr double kClusterRadius = 0.15;
  const std::size_t left = (n + 1) / 2;
  Tensor2 out(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_left = i < left;
    const std::size_t local = in_left ? i : i - left;
    const std::size_t local_n = in_left ? left : n - left;
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(local) / static_cast<double>(local_n);
    out(i, 0) = (in_left ? -0.75 : 0.75) + kClusterRadius * std::cos(theta);
    out(i, 1) = kClusterRadius * std::sin(theta);
  }
  return out;
}

}  // namespace

Tensor2 make_dataset(const ToyDatasetSpec& spec) {
  if (spec.shape == ToyShape::kCustomCsv) {
    if (spec.csv_path.empty()) throw ConfigError("custom_csv dataset needs dataset.csv_path");
    return load_csv(spec.csv_path);
  }
  if (spec.n_points == 0) throw ConfigError("dataset.n_points must be positive");
  if (spec.dim != 2) {
    throw ConfigError("generated toy shapes are 2D; use custom_csv for other widths");
  }
  if (spec.noise_sigma < 0.0) throw ConfigError("dataset.noise_sigma must be >= 0");

  Tensor2 points(0, 0);
  switch (spec.shape) {
    case ToyShape::kInfinitySymbol: points = make_infinity_symbol(spec.n_points); break;
    case ToyShape::kRing: points = make_ring(spec.n_points); break;
    case ToyShape::kGrid: points = make_grid(spec.n_points); break;
    case ToyShape::kTwoClusters: points = make_two_clusters(spec.n_points); break;
    case ToyShape::kCustomCsv: break;  // handled above
  }

  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    for (std::size_t r = 0; r < points.rows(); ++r) {
      for (double& v : points.row(r)) v += spec.noise_sigma * standard_normal(rng);
    }
  }
  points.ensure_finite("make_dataset");
  return points;
}

double dataset_diameter(const Tensor2& points) {
  if (points.rows() < 2) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t j = i + 1; j < points.rows(); ++j) {
      best = std::max(best, squared_distance(points.row(i), points.row(j)));
    }
  }
  return std::sqrt(best);
}

void save_csv(const std::string& path, const Tensor2& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path);
  for (std::size_t c = 0; c < points.cols(); ++c) {
    out << (c == 0 ? "" : ",") << "x" << c;
  }
  out << "\n";
  char buf[40];
  for (std::size_t r = 0; r < points.rows(); ++r) {
    auto row = points.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << (c == 0 ? "" : ",") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_csv: write failed for " + path);
}

Tensor2 load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("load_csv: " + path + " is empty");

  std::size_t cols = 1;
  for (char ch : line) {
    if (ch == ',') ++cols;
  }

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t got = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError("load_csv: " + path + " line " + std::to_string(line_no) +
                          ": bad number '" + cell + "'");
      }
      if (used != cell.size()) {
        throw ConfigError("load_csv: " + path + " line " + std::to_string(line_no) +
                          ": trailing characters in '" + cell + "'");
      }
      values.push_back(v);
      ++got;
    }
    if (got != cols) {
      throw ConfigError("load_csv: " + path + " line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " columns, found " + std::to_string(got));
    }
    ++rows;
  }
  if (rows == 0) throw ConfigError("load_csv: " + path + " has a header but no rows");

  Tensor2 out(rows, cols);
  std::copy(values.begin(), values.end(), out.data());
  out.ensure_finite("load_csv");
  return out;
}

}  // namespace rsimle
