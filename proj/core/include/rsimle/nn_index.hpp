#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rsimle/tensor.hpp"

namespace rsimle {

enum class DistanceKind { kSquaredEuclidean, kEuclidean };

// Data-by-sample distance matrix.  Rows index data points, columns index
// candidate samples; entries are in the units named by kind().
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t data_count, std::size_t sample_count, DistanceKind kind);

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  double& at(std::size_t i, std::size_t j) { return values_(i, j); }

  std::size_t data_count() const noexcept { return values_.rows(); }
  std::size_t sample_count() const noexcept { return values_.cols(); }
  DistanceKind kind() const noexcept { return kind_; }

  // min over data points of the distance to sample j.
  double min_over_data(std::size_t j) const;

 private:
  Tensor2 values_;
  DistanceKind kind_;
};

DistanceMatrix pairwise_distances(const Tensor2& data, const Tensor2& samples,
                                  DistanceKind kind = DistanceKind::kSquaredEuclidean);

// Indices j of samples with min_i d(x_i, s_j) >= epsilon, in increasing order.
// epsilon is always a plain Euclidean radius; squared matrices are compared
// against epsilon^2 so both kinds select the same set.
std::vector<std::size_t> filter_by_epsilon(const DistanceMatrix& distances, double epsilon);

// Per-data-point nearest accepted sample.  dist[i] is reported in the
// matrix's own units.
struct AssignmentResult {
  std::vector<std::size_t> sigma;  // sigma[i] = accepted sample index nearest to data point i
  std::vector<double> dist;        // distance realised by that choice
  std::size_t accepted_count = 0;
};

// Ties go to the lowest sample index.  Throws EmptyAcceptedSetError when
// `accepted` is empty.
AssignmentResult assign_nearest(const DistanceMatrix& distances,
                                std::span<const std::size_t> accepted);

// Random projection for distance computations in a lower-dimensional space.
// Entries are N(0, 1) / sqrt(projected_dim), drawn from the seed.
struct ProjectionSpec {
  std::size_t input_dim = 0;
  std::size_t projected_dim = 0;
  std::uint64_t seed = 0;
  Tensor2 matrix;  // projected_dim x input_dim

  static ProjectionSpec create(std::size_t input_dim, std::size_t projected_dim,
                               std::uint64_t seed);
};

// Applies the projection and scales every projected row to unit norm.
// Throws std::domain_error if a row projects to (numerically) zero.
Tensor2 project_and_normalize(const Tensor2& points, const ProjectionSpec& spec);

// The space in which the epsilon filter and nearest-neighbour assignment
// operate.  Raw means distances are taken directly in data space; a
// projection is only ever engaged when it actually reduces dimension, so
// a same-dimension "projection" request degenerates to the raw space and
// raw/projected code paths agree exactly.
class FilterSpace {
 public:
  static FilterSpace raw() { return FilterSpace{}; }
  static FilterSpace for_dims(std::size_t input_dim, std::size_t projected_dim,
                              std::uint64_t seed);

  bool is_raw() const noexcept { return !projection_.has_value(); }
  const std::optional<ProjectionSpec>& projection() const noexcept { return projection_; }

  // Maps points into the filter space (identity copy when raw).
  Tensor2 map(const Tensor2& points) const;

 private:
  std::optional<ProjectionSpec> projection_;
};

}  // namespace rsimle
