#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "rsimle/errors.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/rng.hpp"
#include "rsimle/tensor.hpp"

using namespace rsimle;

namespace {

Tensor2 random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tensor2 out(n, dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (double& v : out.row(r)) v = standard_normal(rng);
  }
  return out;
}

}  // namespace

// ------------------------------------------------------ pairwise distances

TEST_CASE("pairwise_distances matches hand-computed values in both kinds") {
  const Tensor2 data = Tensor2::from_rows({{0.0, 0.0}, {1.0, 0.0}});
  const Tensor2 samples = Tensor2::from_rows({{0.0, 1.0}, {3.0, 4.0}});

  const DistanceMatrix sq = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);
  CHECK(sq.kind() == DistanceKind::kSquaredEuclidean);
  CHECK(sq.data_count() == 2);
  CHECK(sq.sample_count() == 2);
  CHECK(sq(0, 0) == 1.0);
  CHECK(sq(0, 1) == 25.0);
  CHECK(sq(1, 0) == 2.0);
  CHECK(sq(1, 1) == 20.0);
  CHECK(sq.min_over_data(0) == 1.0);
  CHECK(sq.min_over_data(1) == 20.0);

  const DistanceMatrix plain = pairwise_distances(data, samples, DistanceKind::kEuclidean);
  CHECK(plain.kind() == DistanceKind::kEuclidean);
  CHECK(plain(0, 1) == 5.0);
  CHECK(plain(1, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("pairwise_distances validates inputs") {
  CHECK_THROWS_AS(pairwise_distances(Tensor2(2, 2, 0.0), Tensor2(2, 3, 0.0)),
                  std::invalid_argument);
  Tensor2 bad(1, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(pairwise_distances(bad, Tensor2(1, 2, 0.0)), std::runtime_error);
}

// ------------------------------------------------------------ epsilon filter

TEST_CASE("filter_by_epsilon keeps exactly the samples clear of every data point") {
  const Tensor2 data = Tensor2::from_rows({{0.0, 0.0}, {1.0, 0.0}});
  const Tensor2 samples = Tensor2::from_rows({{0.0, 1.0}, {3.0, 4.0}});
  const DistanceMatrix sq = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);

  // Sample 0 sits at plain distance 1 from the first data point.
  CHECK(filter_by_epsilon(sq, 1.5) == std::vector<std::size_t>{1});
  CHECK(filter_by_epsilon(sq, 1.0) == std::vector<std::size_t>{0, 1});  // boundary kept
  CHECK(filter_by_epsilon(sq, 0.0) == std::vector<std::size_t>{0, 1});
  CHECK(filter_by_epsilon(sq, 10.0).empty());

  CHECK_THROWS_AS(filter_by_epsilon(sq, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(filter_by_epsilon(sq, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("epsilon is a plain Euclidean radius for either matrix kind") {
  const Tensor2 data = random_points(5, 3, 1);
  const Tensor2 samples = random_points(40, 3, 2);
  const DistanceMatrix sq = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);
  const DistanceMatrix plain = pairwise_distances(data, samples, DistanceKind::kEuclidean);
  for (const double eps : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    CHECK(filter_by_epsilon(sq, eps) == filter_by_epsilon(plain, eps));
  }
}

TEST_CASE("every accepted sample honours the margin and every rejected one violates it") {
  const Tensor2 data = random_points(20, 2, 3);
  const Tensor2 samples = random_points(50, 2, 4);
  const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);

  for (const double eps : {0.1, 0.5, 1.0, 2.0}) {
    const std::vector<std::size_t> accepted = filter_by_epsilon(dm, eps);
    std::vector<bool> in(samples.rows(), false);
    for (std::size_t j : accepted) in[j] = true;
    for (std::size_t j = 0; j < samples.rows(); ++j) {
      double min_plain = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < data.rows(); ++i) {
        min_plain = std::min(min_plain, std::sqrt(squared_distance(data.row(i), samples.row(j))));
      }
      if (in[j]) {
        CHECK(min_plain >= eps);
      } else {
        CHECK(min_plain < eps);
      }
    }
  }
}

TEST_CASE("the accepted set shrinks monotonically as epsilon grows") {
  const Tensor2 data = random_points(10, 2, 5);
  const Tensor2 samples = random_points(80, 2, 6);
  const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);

  std::vector<std::size_t> previous = filter_by_epsilon(dm, 0.0);
  for (double eps = 0.05; eps < 3.0; eps += 0.05) {
    const std::vector<std::size_t> current = filter_by_epsilon(dm, eps);
    CHECK(current.size() <= previous.size());
    CHECK(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
    previous = current;
  }
}

// ----------------------------------------------------------------- assignment

TEST_CASE("assign_nearest matches a brute-force argmin over the accepted set") {
  const Tensor2 data = random_points(12, 2, 7);
  const Tensor2 samples = random_points(30, 2, 8);
  const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);
  const std::vector<std::size_t> accepted = {1, 4, 5, 9, 17, 22, 29};

  const AssignmentResult result = assign_nearest(dm, accepted);
  CHECK(result.accepted_count == accepted.size());
  CHECK(result.sigma.size() == data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t best_j = accepted.front();
    double best_d = dm(i, best_j);
    for (std::size_t j : accepted) {
      if (dm(i, j) < best_d) {
        best_d = dm(i, j);
        best_j = j;
      }
    }
    CHECK(result.sigma[i] == best_j);
    CHECK(result.dist[i] == best_d);
  }
}

TEST_CASE("assignment ties resolve to the lowest sample index") {
  const Tensor2 data = Tensor2::from_rows({{0.0, 0.0}});
  const Tensor2 samples = Tensor2::from_rows({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}});
  const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);

  const std::vector<std::size_t> all = {0, 1, 2};
  CHECK(assign_nearest(dm, all).sigma[0] == 0);

  const std::vector<std::size_t> later = {1, 2};
  CHECK(assign_nearest(dm, later).sigma[0] == 1);
}

TEST_CASE("assignment on an empty accepted set is an explicit error") {
  const DistanceMatrix dm =
      pairwise_distances(random_points(3, 2, 9), random_points(4, 2, 10));
  const std::vector<std::size_t> none;
  CHECK_THROWS_AS(assign_nearest(dm, none), EmptyAcceptedSetError);

  const std::vector<std::size_t> oob = {4};
  CHECK_THROWS_AS(assign_nearest(dm, oob), std::out_of_range);
}

// ----------------------------------------------------------------- projection

TEST_CASE("projection matrices are seeded and scaled like N(0,1)/sqrt(projected_dim)") {
  const ProjectionSpec a = ProjectionSpec::create(64, 16, 5);
  const ProjectionSpec b = ProjectionSpec::create(64, 16, 5);
  const ProjectionSpec c = ProjectionSpec::create(64, 16, 6);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix != c.matrix);
  CHECK(a.matrix.rows() == 16);
  CHECK(a.matrix.cols() == 64);

  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < a.matrix.size(); ++i) mean += a.matrix.data()[i];
  mean /= static_cast<double>(a.matrix.size());
  for (std::size_t i = 0; i < a.matrix.size(); ++i) {
    const double d = a.matrix.data()[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(a.matrix.size() - 1);
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0 / 16.0).epsilon(0.15));

  CHECK_THROWS_AS(ProjectionSpec::create(0, 4, 1), std::invalid_argument);
}

TEST_CASE("project_and_normalize yields unit rows and rejects zero-norm rows") {
  const ProjectionSpec spec = ProjectionSpec::create(8, 3, 11);
  const Tensor2 points = random_points(20, 8, 12);
  const Tensor2 projected = project_and_normalize(points, spec);
  CHECK(projected.rows() == 20);
  CHECK(projected.cols() == 3);
  for (std::size_t r = 0; r < projected.rows(); ++r) {
    double norm2 = 0.0;
    for (double v : projected.row(r)) norm2 += v * v;
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(project_and_normalize(Tensor2(1, 8, 0.0), spec), std::domain_error);
  CHECK_THROWS_AS(project_and_normalize(Tensor2(1, 5, 1.0), spec), std::invalid_argument);
}

namespace {

// Spearman rank correlation between the upper-triangle pairwise squared
// distances of two equally sized point sets.
double pairwise_distance_rank_correlation(const Tensor2& a, const Tensor2& b) {
  std::vector<double> da, db;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.rows(); ++j) {
      da.push_back(squared_distance(a.row(i), a.row(j)));
      db.push_back(squared_distance(b.row(i), b.row(j)));
    }
  }
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) rank[idx[i]] = static_cast<double>(i);
    return rank;
  };
  const std::vector<double> ra = ranks(da);
  const std::vector<double> rb = ranks(db);
  const double mean_rank = (static_cast<double>(ra.size()) - 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean_rank) * (rb[i] - mean_rank);
    va += (ra[i] - mean_rank) * (ra[i] - mean_rank);
    vb += (rb[i] - mean_rank) * (rb[i] - mean_rank);
  }
  return cov / std::sqrt(va * vb);
}

// Each output row is the input row through the projection matrix, nothing else.
Tensor2 project_only(const Tensor2& points, const ProjectionSpec& spec) {
  Tensor2 out(points.rows(), spec.projected_dim);
  for (std::size_t r = 0; r < points.rows(); ++r) {
    auto in = points.row(r);
    for (std::size_t p = 0; p < spec.projected_dim; ++p) {
      double acc = 0.0;
      for (std::size_t c = 0; c < spec.input_dim; ++c) acc += spec.matrix(p, c) * in[c];
      out(r, p) = acc;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("random projection roughly preserves the ordering of pairwise distances") {
  // 100 points in 64 dimensions down to 16.  Isotropic high-dim clouds are a
  // known worst case -- their pairwise distances concentrate so tightly that
  // no 16-dim projection can keep the ranks -- so the check runs on points
  // along a low-dimensional manifold (an arc), where near-versus-far is real
  // structure, the regime nearest-neighbour filtering actually lives in.
  const std::size_t n = 100, dim = 64;
  std::mt19937_64 rng(13);
  std::vector<double> u(dim), w(dim);
  for (double& v : u) v = standard_normal(rng);
  for (double& v : w) v = standard_normal(rng);
  double uu = 0.0, uw = 0.0;
  for (std::size_t c = 0; c < dim; ++c) uu += u[c] * u[c];
  for (std::size_t c = 0; c < dim; ++c) uw += u[c] * w[c];
  for (std::size_t c = 0; c < dim; ++c) w[c] -= uw / uu * u[c];  // orthogonalize
  double ww = 0.0;
  for (std::size_t c = 0; c < dim; ++c) ww += w[c] * w[c];
  for (std::size_t c = 0; c < dim; ++c) u[c] /= std::sqrt(uu);
  for (std::size_t c = 0; c < dim; ++c) w[c] /= std::sqrt(ww);

  const double pi = 3.14159265358979323846;
  Tensor2 points(n, dim);
  for (std::size_t r = 0; r < n; ++r) {
    const double alpha = pi * static_cast<double>(r) / static_cast<double>(n - 1);
    for (std::size_t c = 0; c < dim; ++c) {
      points(r, c) =
          5.0 * (std::cos(alpha) * u[c] + std::sin(alpha) * w[c]) + 0.05 * standard_normal(rng);
    }
  }

  const ProjectionSpec spec = ProjectionSpec::create(64, 16, 14);
  const double bare = pairwise_distance_rank_correlation(points, project_only(points, spec));
  CHECK(bare > 0.7);

  // The normalized pipeline promises the same only for unit-length inputs;
  // normalization drops radial information on purpose.
  Tensor2 unit = points;
  for (std::size_t r = 0; r < unit.rows(); ++r) {
    double norm = 0.0;
    for (double v : unit.row(r)) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : unit.row(r)) v /= norm;
  }
  const double normalized =
      pairwise_distance_rank_correlation(unit, project_and_normalize(unit, spec));
  CHECK(normalized > 0.7);
}

// ---------------------------------------------------------------- FilterSpace

TEST_CASE("FilterSpace engages a projection only when it reduces dimension") {
  CHECK(FilterSpace::raw().is_raw());
  CHECK(FilterSpace::for_dims(2, 0, 1).is_raw());
  CHECK(FilterSpace::for_dims(2, 2, 1).is_raw());
  CHECK(FilterSpace::for_dims(2, 5, 1).is_raw());
  CHECK_FALSE(FilterSpace::for_dims(64, 16, 1).is_raw());
}

TEST_CASE("the raw filter space maps points to themselves bit for bit") {
  const Tensor2 points = random_points(7, 2, 15);
  const FilterSpace same_dim = FilterSpace::for_dims(2, 2, 99);
  CHECK(same_dim.map(points) == points);
  CHECK(FilterSpace::raw().map(points) == points);
}
