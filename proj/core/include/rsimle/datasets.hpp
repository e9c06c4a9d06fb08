#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rsimle/tensor.hpp"

namespace rsimle {

enum class ToyShape { kInfinitySymbol, kRing, kGrid, kTwoClusters, kCustomCsv };

ToyShape toy_shape_from_string(std::string_view name);
std::string_view to_string(ToyShape shape);

// Recipe for a small 2D point set (or a CSV-loaded set of any width).
struct ToyDatasetSpec {
  ToyShape shape = ToyShape::kInfinitySymbol;
  std::size_t n_points = 20;  // few-shot scale by default
  double noise_sigma = 0.0;   // isotropic Gaussian jitter added after shaping
  std::uint64_t seed = 0;
  std::size_t dim = 2;
  std::string csv_path;  // only read when shape == kCustomCsv
};

// Deterministic dataset for the spec: same spec, same bytes.  Generated
// shapes fill [-1, 1]^2; noise is seeded and applied on top.
Tensor2 make_dataset(const ToyDatasetSpec& spec);

// Largest pairwise plain Euclidean distance.
double dataset_diameter(const Tensor2& points);

// CSV with header "x0,x1,..." and 17-significant-digit values, so numbers
// survive a write/read round trip exactly.
void save_csv(const std::string& path, const Tensor2& points);
Tensor2 load_csv(const std::string& path);

}  // namespace rsimle
