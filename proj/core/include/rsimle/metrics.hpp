#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsimle/tensor.hpp"

namespace rsimle {

// Moment-matched Gaussian: sample mean and unbiased sample covariance.
// The covariance is kept exactly symmetric; tiny negative eigenvalues from
// degenerate point sets are treated as zero downstream.
struct GaussianFit {
  std::vector<double> mean;
  Tensor2 covariance;  // d x d
};

GaussianFit fit_gaussian(const Tensor2& points);

// Squared Wasserstein-2 distance between the two Gaussians:
// |mu_a - mu_b|^2 + tr(Ca + Cb - 2 (Ca^1/2 Cb Ca^1/2)^1/2).
// Exactly symmetric in its arguments and zero for identical inputs.
double frechet_distance(const GaussianFit& a, const GaussianFit& b);

// Support estimate as a union of balls: one ball per point, with radius the
// distance to its k-th nearest neighbour among the other points.
struct ManifoldEstimate {
  Tensor2 support;
  std::vector<double> radii;  // plain Euclidean
  std::size_t k = 0;

  // Membership is inclusive: on the boundary counts as inside.
  bool contains(std::span<const double> point) const;
};

ManifoldEstimate estimate_manifold(const Tensor2& points, std::size_t k = 3);

struct PrecisionRecall {
  double precision = 0.0;  // fraction of fake points on the real manifold
  double recall = 0.0;     // fraction of real points on the fake manifold
};

PrecisionRecall precision_recall(const Tensor2& real, const Tensor2& fake, std::size_t k = 3);

}  // namespace rsimle
