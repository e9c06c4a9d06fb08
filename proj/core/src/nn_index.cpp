#include "rsimle/nn_index.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rsimle/errors.hpp"
#include "rsimle/rng.hpp"

namespace rsimle {

DistanceMatrix::DistanceMatrix(std::size_t data_count, std::size_t sample_count, DistanceKind kind)
    : values_(data_count, sample_count), kind_(kind) {
  if (data_count == 0 || sample_count == 0) {
    throw std::invalid_argument("DistanceMatrix: empty data or sample set");
  }
}

double DistanceMatrix::min_over_data(std::size_t j) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data_count(); ++i) {
    best = std::min(best, values_(i, j));
  }
  return best;
}

DistanceMatrix pairwise_distances(const Tensor2& data, const Tensor2& samples, DistanceKind kind) {
  if (data.cols() != samples.cols()) {
    throw std::invalid_argument("pairwise_distances: dimension mismatch (" +
                                std::to_string(data.cols()) + " vs " +
                                std::to_string(samples.cols()) + ")");
  }
  data.ensure_finite("pairwise_distances data");
  samples.ensure_finite("pairwise_distances samples");

  DistanceMatrix out(data.rows(), samples.rows(), kind);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto x = data.row(i);
    for (std::size_t j = 0; j < samples.rows(); ++j) {
      const double d2 = squared_distance(x, samples.row(j));
      out.at(i, j) = kind == DistanceKind::kSquaredEuclidean ? d2 : std::sqrt(d2);
    }
  }
  return out;
}

std::vector<std::size_t> filter_by_epsilon(const DistanceMatrix& distances, double epsilon) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw std::invalid_argument("filter_by_epsilon: epsilon must be finite and >= 0");
  }
  const double threshold =
      distances.kind() == DistanceKind::kSquaredEuclidean ? epsilon * epsilon : epsilon;
  std::vector<std::size_t> accepted;
  accepted.reserve(distances.sample_count());
  for (std::size_t j = 0; j < distances.sample_count(); ++j) {
    if (distances.min_over_data(j) >= threshold) accepted.push_back(j);
  }
  return accepted;
}

AssignmentResult assign_nearest(const DistanceMatrix& distances,
                                std::span<const std::size_t> accepted) {
  if (accepted.empty()) throw EmptyAcceptedSetError();
  for (std::size_t j : accepted) {
    if (j >= distances.sample_count()) {
      throw std::out_of_range("assign_nearest: accepted index " + std::to_string(j));
    }
  }

  AssignmentResult result;
  result.accepted_count = accepted.size();
  result.sigma.resize(distances.data_count());
  result.dist.resize(distances.data_count());
  for (std::size_t i = 0; i < distances.data_count(); ++i) {
    std::size_t best_j = accepted.front();
    double best_d = distances(i, best_j);
    for (std::size_t j : accepted) {
      const double d = distances(i, j);
      if (d < best_d) {  // strict: ties keep the lowest index seen first
        best_d = d;
        best_j = j;
      }
    }
    result.sigma[i] = best_j;
    result.dist[i] = best_d;
  }
  return result;
}

ProjectionSpec ProjectionSpec::create(std::size_t input_dim, std::size_t projected_dim,
                                      std::uint64_t seed) {
  if (input_dim == 0 || projected_dim == 0) {
    throw std::invalid_argument("ProjectionSpec: dimensions must be positive");
  }
  ProjectionSpec spec;
  spec.input_dim = input_dim;
  spec.projected_dim = projected_dim;
  spec.seed = seed;
  spec.matrix = Tensor2(projected_dim, input_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(projected_dim));
  std::mt19937_64 rng(seed);
  for (std::size_t r = 0; r < projected_dim; ++r) {
    for (std::size_t c = 0; c < input_dim; ++c) {
      spec.matrix(r, c) = standard_normal(rng) * scale;
    }
  }
  return spec;
}

Tensor2 project_and_normalize(const Tensor2& points, const ProjectionSpec& spec) {
  if (points.cols() != spec.input_dim) {
    throw std::invalid_argument("project_and_normalize: points have " +
                                std::to_string(points.cols()) + " columns, projection expects " +
                                std::to_string(spec.input_dim));
  }
  Tensor2 out(points.rows(), spec.projected_dim);
  for (std::size_t r = 0; r < points.rows(); ++r) {
    auto in = points.row(r);
    auto dst = out.row(r);
    double norm2 = 0.0;
    for (std::size_t o = 0; o < spec.projected_dim; ++o) {
      double acc = 0.0;
      auto prow = spec.matrix.row(o);
      for (std::size_t c = 0; c < in.size(); ++c) acc += prow[c] * in[c];
      dst[o] = acc;
      norm2 += acc * acc;
    }
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::domain_error("project_and_normalize: row " + std::to_string(r) +
                              " has zero projected norm");
    }
    for (std::size_t o = 0; o < spec.projected_dim; ++o) dst[o] /= norm;
  }
  return out;
}

FilterSpace FilterSpace::for_dims(std::size_t input_dim, std::size_t projected_dim,
                                  std::uint64_t seed) {
  FilterSpace space;
  if (projected_dim > 0 && projected_dim < input_dim) {
    space.projection_ = ProjectionSpec::create(input_dim, projected_dim, seed);
  }
  return space;
}

Tensor2 FilterSpace::map(const Tensor2& points) const {
  if (!projection_) return points;
  return project_and_normalize(points, *projection_);
}

}  // namespace rsimle
