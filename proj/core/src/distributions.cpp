#include "rsimle/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rsimle/rng.hpp"

namespace rsimle {

namespace {

// Series expansion for P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p: series failed to converge");
}

// Modified Lentz continued fraction for Q(a, x) = 1 - P(a, x), for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p: continued fraction failed to converge");
}

// Central chi-squared density with nu degrees of freedom at x > 0.
double central_chi_squared_pdf(double nu, double x) {
  return 0.5 * std::exp((0.5 * nu - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(0.5 * nu));
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
  for (double v : sorted_) {
    if (std::isnan(v)) throw std::invalid_argument("EmpiricalCdf: NaN sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const {
  if (!(q > 0.0) || q > 1.0) throw std::domain_error("EmpiricalCdf::quantile: q must be in (0, 1]");
  const double n = static_cast<double>(sorted_.size());
  const std::size_t idx = static_cast<std::size_t>(std::ceil(q * n)) - 1;
  return sorted_[std::min(idx, sorted_.size() - 1)];
}

NoncentralChiSquared::NoncentralChiSquared(double dof, double noncentrality)
    : dof_(dof), lambda_(noncentrality) {
  if (!(dof > 0.0)) throw std::domain_error("NoncentralChiSquared: dof must be positive");
  if (lambda_ < 0.0) throw std::domain_error("NoncentralChiSquared: noncentrality must be >= 0");
}

double NoncentralChiSquared::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  // sum_j Poisson(j; lambda/2) * P(dof/2 + j, x/2).  Successive chi-squared
  // terms only shrink, so the truncated Poisson tail bounds the remainder.
  const double half_lambda = 0.5 * lambda_;
  double weight = std::exp(-half_lambda);
  double weight_sum = 0.0;
  double acc = 0.0;
  for (int j = 0; j < 10000; ++j) {
    const double term = gamma_p(0.5 * dof_ + j, 0.5 * x);
    acc += weight * term;
    weight_sum += weight;
    const double tail = (1.0 - weight_sum) * term;
    if (j > half_lambda && tail < 1e-13 * std::max(acc, 1e-300)) break;
    weight *= half_lambda / (j + 1.0);
  }
  return std::min(acc, 1.0);
}

double NoncentralChiSquared::pdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double half_lambda = 0.5 * lambda_;
  double weight = std::exp(-half_lambda);
  double weight_sum = 0.0;
  double acc = 0.0;
  double peak = 0.0;
  for (int j = 0; j < 10000; ++j) {
    const double term = central_chi_squared_pdf(dof_ + 2.0 * j, x);
    acc += weight * term;
    weight_sum += weight;
    peak = std::max(peak, term);
    if (j > half_lambda && (1.0 - weight_sum) * peak < 1e-14 * std::max(acc, 1e-300)) break;
    weight *= half_lambda / (j + 1.0);
  }
  return acc;
}

double NoncentralChiSquared::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("NoncentralChiSquared::quantile: p must be in (0, 1)");
  }
  double lo = 0.0;
  double hi = mean() + 10.0 * std::sqrt(2.0 * dof_ + 8.0 * lambda_);
  while (cdf(hi) < p) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double NoncentralChiSquared::sample(std::mt19937_64& rng) const {
  const double rounded = std::round(dof_);
  if (!(std::abs(dof_ - rounded) < 1e-12) || rounded < 1.0) {
    throw std::domain_error("NoncentralChiSquared::sample: direct simulation needs integer dof");
  }
  const int k = static_cast<int>(rounded);
  const double delta = std::sqrt(lambda_);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double z = standard_normal(rng) + (i == 0 ? delta : 0.0);
    acc += z * z;
  }
  return acc;
}

ScalarDistribution ScalarDistribution::noncentral_chi_squared(double dof, double noncentrality) {
  const NoncentralChiSquared dist(dof, noncentrality);
  ScalarDistribution out;
  out.cdf = [dist](double t) { return dist.cdf(t); };
  out.pdf = [dist](double t) { return dist.pdf(t); };
  out.sample = [dist](std::mt19937_64& rng) { return dist.sample(rng); };
  return out;
}

ScalarDistribution ScalarDistribution::empirical(EmpiricalCdf ecdf) {
  ScalarDistribution out;
  out.cdf = [ecdf](double t) { return ecdf(t); };
  out.sample = [ecdf](std::mt19937_64& rng) {
    const auto& sorted = ecdf.sorted_samples();
    const std::size_t idx =
        std::min(sorted.size() - 1,
                 static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(sorted.size())));
    return sorted[idx];
  };
  return out;
}

ScalarDistribution ScalarDistribution::point_mass(double value) {
  ScalarDistribution out;
  out.cdf = [value](double t) { return t >= value ? 1.0 : 0.0; };
  out.sample = [value](std::mt19937_64&) { return value; };
  return out;
}

ScalarDistribution ScalarDistribution::custom(std::function<double(double)> cdf,
                                              std::function<double(double)> pdf,
                                              std::function<double(std::mt19937_64&)> sample) {
  ScalarDistribution out;
  out.cdf = std::move(cdf);
  out.pdf = std::move(pdf);
  out.sample = std::move(sample);
  return out;
}

}  // namespace rsimle
