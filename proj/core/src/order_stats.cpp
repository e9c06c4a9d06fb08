#include "rsimle/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsimle {

namespace {

void check_m(std::size_t m, const char* where) {
  if (m == 0) throw std::invalid_argument(std::string(where) + ": m must be positive");
}

double check_cdf_value(double f, const char* where) {
  if (!(f >= 0.0) || !(f <= 1.0)) {
    throw std::domain_error(std::string(where) + ": CDF value " + std::to_string(f) +
                            " outside [0, 1]");
  }
  return f;
}

}  // namespace

double min_cdf_transform(const ScalarFn& cdf, std::size_t m, double t) {
  check_m(m, "min_cdf_transform");
  const double f = check_cdf_value(cdf(t), "min_cdf_transform");
  if (m == 1) return f;  // avoid the 1 - (1 - f) round trip for tiny f
  return 1.0 - std::pow(1.0 - f, static_cast<double>(m));
}

double min_pdf_transform(const ScalarFn& pdf, const ScalarFn& cdf, std::size_t m, double t) {
  check_m(m, "min_pdf_transform");
  const double f = check_cdf_value(cdf(t), "min_pdf_transform");
  const double density = pdf(t);
  if (density < 0.0) throw std::domain_error("min_pdf_transform: negative density");
  if (m == 1) return density;
  return static_cast<double>(m) * std::pow(1.0 - f, static_cast<double>(m - 1)) * density;
}

EmpiricalCdf monte_carlo_min_distance(const ScalarDistribution& dist, std::size_t m,
                                      std::size_t trials, std::uint64_t seed) {
  check_m(m, "monte_carlo_min_distance");
  if (trials == 0) throw std::invalid_argument("monte_carlo_min_distance: trials must be positive");
  if (!dist.sample) throw std::invalid_argument("monte_carlo_min_distance: distribution lacks a sampler");

  std::mt19937_64 rng(seed);
  std::vector<double> minima(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    double best = dist.sample(rng);
    for (std::size_t j = 1; j < m; ++j) {
      best = std::min(best, dist.sample(rng));
    }
    minima[t] = best;
  }
  return EmpiricalCdf(std::move(minima));
}

double phi_ratio(const ScalarFn& cdf, const ScalarFn& cdf_tilde, std::size_t n, std::size_t m,
                 double t) {
  check_m(n, "phi_ratio (n)");
  check_m(m, "phi_ratio (m)");
  const double f = check_cdf_value(cdf(t), "phi_ratio");
  const double f_tilde = check_cdf_value(cdf_tilde(t), "phi_ratio");
  if (f_tilde >= 1.0) {
    throw std::domain_error("phi_ratio: F_tilde(t) = 1, ratio is unbounded at t = " +
                            std::to_string(t));
  }
  const double ratio = static_cast<double>(n) / static_cast<double>(m);
  return ratio * std::pow(1.0 - f, static_cast<double>(n - 1)) /
         std::pow(1.0 - f_tilde, static_cast<double>(m - 1));
}

double truncated_pdf(const ScalarFn& pdf, const ScalarFn& cdf, double truncation_point, double t) {
  const double mass = check_cdf_value(cdf(truncation_point), "truncated_pdf");
  if (mass <= 0.0) {
    throw std::domain_error("truncated_pdf: no mass at or below the truncation point");
  }
  if (t > truncation_point) return 0.0;
  const double density = pdf(t);
  if (density < 0.0) throw std::domain_error("truncated_pdf: negative density");
  return density / mass;
}

std::vector<double> misalignment_gap(const ScalarFn& cdf, std::size_t m,
                                     std::span<const double> grid) {
  check_m(m, "misalignment_gap");
  std::vector<double> gap(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = check_cdf_value(cdf(grid[i]), "misalignment_gap");
    gap[i] = std::abs(min_cdf_transform(cdf, m, grid[i]) - f);
  }
  return gap;
}

double ks_statistic(const EmpiricalCdf& empirical, const ScalarFn& cdf) {
  const auto& xs = empirical.sorted_samples();
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = check_cdf_value(cdf(xs[i]), "ks_statistic");
    // The empirical CDF jumps from i/n to (i+1)/n at xs[i]; check both sides.
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return worst;
}

double ks_critical_value_99(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ks_critical_value_99: n must be positive");
  return 1.63 / std::sqrt(static_cast<double>(n));
}

namespace {

double simpson_rule(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_step(const ScalarFn& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(fa, flm, fm, a, m);
  const double right = simpson_rule(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive_simpson: max recursion depth reached");
  // Second test: once delta sits at the roundoff floor of the local values,
  // further splitting only chases noise (the halved tolerances of deep
  // recursion can drop below what double arithmetic can even represent).
  const double noise_floor =
      1e-15 * (std::abs(left) + std::abs(right) + std::abs(whole));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise_floor) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, double tol) {
  if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: need b >= a");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson_rule(fa, fm, fb, a, b);
  // Depth 100 leaves room for sqrt-type endpoint singularities, whose error
  // shrinks only ~2.8x per split against a tolerance that halves.
  return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 100);
}

}  // namespace rsimle
