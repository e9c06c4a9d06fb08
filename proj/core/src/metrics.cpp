#include "rsimle/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsimle {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;

using EigenMatrix = Eigen::MatrixXd;

EigenMatrix to_eigen(const Tensor2& t) {
  EigenMatrix m(t.rows(), t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t(r, c);
  }
  return m;
}

void check_covariance(const Tensor2& cov, const char* which) {
  if (cov.rows() != cov.cols()) {
    throw std::invalid_argument(std::string("frechet_distance: ") + which +
                                " covariance is not square");
  }
  for (std::size_t r = 0; r < cov.rows(); ++r) {
    for (std::size_t c = r + 1; c < cov.cols(); ++c) {
      if (std::abs(cov(r, c) - cov(c, r)) > kSymmetryTol) {
        throw std::invalid_argument(std::string("frechet_distance: ") + which +
                                    " covariance is not symmetric");
      }
    }
  }
}

// Matrix square root of a symmetric PSD matrix via eigendecomposition.
// Eigenvalues down to kEigenvalueFloor are clamped to zero; anything lower
// means the input was not a covariance at all.
EigenMatrix psd_sqrt(const EigenMatrix& m, const char* which) {
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(std::string("frechet_distance: eigendecomposition failed for ") +
                             which);
  }
  Eigen::VectorXd vals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < kEigenvalueFloor) {
      throw std::domain_error(std::string("frechet_distance: ") + which +
                              " has eigenvalue " + std::to_string(vals(i)) +
                              ", not positive semidefinite");
    }
    vals(i) = std::max(vals(i), 0.0);
  }
  const Eigen::VectorXd roots = vals.cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

// True when fit `a` precedes fit `b` in the lexicographic order over
// (mean, covariance) used to canonicalise argument order.
bool fit_precedes(const GaussianFit& a, const GaussianFit& b) {
  for (std::size_t i = 0; i < a.mean.size(); ++i) {
    if (a.mean[i] != b.mean[i]) return a.mean[i] < b.mean[i];
  }
  for (std::size_t i = 0; i < a.covariance.size(); ++i) {
    if (a.covariance.data()[i] != b.covariance.data()[i]) {
      return a.covariance.data()[i] < b.covariance.data()[i];
    }
  }
  return false;
}

}  // namespace

GaussianFit fit_gaussian(const Tensor2& points) {
  if (points.rows() == 0) throw std::invalid_argument("fit_gaussian: empty point set");
  points.ensure_finite("fit_gaussian");
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();

  GaussianFit fit;
  fit.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = points.row(r);
    for (std::size_t c = 0; c < d; ++c) fit.mean[c] += row[c];
  }
  for (double& v : fit.mean) v /= static_cast<double>(n);

  fit.covariance = Tensor2(d, d);
  if (n > 1) {
    for (std::size_t r = 0; r < n; ++r) {
      auto row = points.row(r);
      for (std::size_t i = 0; i < d; ++i) {
        const double di = row[i] - fit.mean[i];
        for (std::size_t j = i; j < d; ++j) {
          fit.covariance(i, j) += di * (row[j] - fit.mean[j]);
        }
      }
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        fit.covariance(i, j) /= denom;
        fit.covariance(j, i) = fit.covariance(i, j);  // exact symmetry by construction
      }
    }
  }
  return fit;
}

double frechet_distance(const GaussianFit& a, const GaussianFit& b) {
  if (a.mean.size() != b.mean.size()) {
    throw std::invalid_argument("frechet_distance: dimension mismatch");
  }
  check_covariance(a.covariance, "first");
  check_covariance(b.covariance, "second");
  if (a.covariance.rows() != a.mean.size() || b.covariance.rows() != b.mean.size()) {
    throw std::invalid_argument("frechet_distance: mean/covariance dimension mismatch");
  }

  if (a.mean == b.mean && a.covariance == b.covariance) return 0.0;

  // Mathematically symmetric already; evaluating in a canonical argument
  // order makes it bit-for-bit symmetric too.
  const bool swap = fit_precedes(b, a);
  const GaussianFit& lo = swap ? b : a;
  const GaussianFit& hi = swap ? a : b;

  double mean_term = 0.0;
  for (std::size_t i = 0; i < lo.mean.size(); ++i) {
    const double d = lo.mean[i] - hi.mean[i];
    mean_term += d * d;
  }

  const EigenMatrix ca = to_eigen(lo.covariance);
  const EigenMatrix cb = to_eigen(hi.covariance);
  const EigenMatrix ca_sqrt = psd_sqrt(ca, "first");
  const EigenMatrix cross = psd_sqrt(ca_sqrt * cb * ca_sqrt, "cross term");

  const double trace_term = ca.trace() + cb.trace() - 2.0 * cross.trace();
  const double value = mean_term + trace_term;
  // Cancellation can leave a tiny negative residue when the fits coincide.
  return value < 0.0 && value > -1e-9 ? 0.0 : value;
}

bool ManifoldEstimate::contains(std::span<const double> point) const {
  if (point.size() != support.cols()) {
    throw std::invalid_argument("ManifoldEstimate::contains: dimension mismatch");
  }
  for (std::size_t i = 0; i < support.rows(); ++i) {
    const double d2 = squared_distance(support.row(i), point);
    if (d2 <= radii[i] * radii[i]) return true;
  }
  return false;
}

ManifoldEstimate estimate_manifold(const Tensor2& points, std::size_t k) {
  if (k == 0) throw std::invalid_argument("estimate_manifold: k must be positive");
  if (points.rows() <= k) {
    throw std::invalid_argument("estimate_manifold: need more than k = " + std::to_string(k) +
                                " points, got " + std::to_string(points.rows()));
  }
  points.ensure_finite("estimate_manifold");

  ManifoldEstimate est;
  est.support = points;
  est.k = k;
  est.radii.resize(points.rows());
  std::vector<double> dists;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    dists.clear();
    for (std::size_t j = 0; j < points.rows(); ++j) {
      if (j == i) continue;  // a point is not its own neighbour
      dists.push_back(squared_distance(points.row(i), points.row(j)));
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    est.radii[i] = std::sqrt(dists[k - 1]);
  }
  return est;
}

PrecisionRecall precision_recall(const Tensor2& real, const Tensor2& fake, std::size_t k) {
  if (real.cols() != fake.cols()) {
    throw std::invalid_argument("precision_recall: dimension mismatch");
  }
  const ManifoldEstimate real_manifold = estimate_manifold(real, k);
  const ManifoldEstimate fake_manifold = estimate_manifold(fake, k);

  PrecisionRecall pr;
  std::size_t covered = 0;
  for (std::size_t j = 0; j < fake.rows(); ++j) {
    if (real_manifold.contains(fake.row(j))) ++covered;
  }
  pr.precision = static_cast<double>(covered) / static_cast<double>(fake.rows());

  covered = 0;
  for (std::size_t i = 0; i < real.rows(); ++i) {
    if (fake_manifold.contains(real.row(i))) ++covered;
  }
  pr.recall = static_cast<double>(covered) / static_cast<double>(real.rows());
  return pr;
}

}  // namespace rsimle
