#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace rsimle {

// Regularized lower incomplete gamma P(a, x); series expansion for small x,
// continued fraction otherwise.
double gamma_p(double a, double x);

// Right-continuous empirical CDF over a fixed sample: F(t) = #{x_i <= t} / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);  // throws on empty input

  double operator()(double t) const;
  // Smallest sample value x with F(x) >= q, for q in (0, 1].
  double quantile(double q) const;

  std::size_t count() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }
  double min() const noexcept { return sorted_.front(); }
  double max() const noexcept { return sorted_.back(); }

 private:
  std::vector<double> sorted_;
};

// Noncentral chi-squared with `dof` degrees of freedom and noncentrality
// lambda.  CDF and PDF are Poisson-weighted series over central chi-squared
// terms; sampling goes the direct route (sum of squared shifted normals) so
// the two paths cross-validate each other.
class NoncentralChiSquared {
 public:
  NoncentralChiSquared(double dof, double noncentrality);

  double dof() const noexcept { return dof_; }
  double noncentrality() const noexcept { return lambda_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;  // bisection on the CDF
  // Direct simulation; requires integer dof.  The noncentrality sits entirely
  // on the first coordinate: X = (Z_1 + sqrt(lambda))^2 + sum Z_i^2.
  double sample(std::mt19937_64& rng) const;

  double mean() const noexcept { return dof_ + lambda_; }

 private:
  double dof_;
  double lambda_;
};

// A scalar distribution described by callables, so theory routines can run
// against analytic families, empirical data, or ad-hoc test distributions
// through one interface.  `pdf` may be empty when no density is available.
struct ScalarDistribution {
  std::function<double(double)> cdf;
  std::function<double(double)> pdf;
  std::function<double(std::mt19937_64&)> sample;

  static ScalarDistribution noncentral_chi_squared(double dof, double noncentrality);
  static ScalarDistribution empirical(EmpiricalCdf ecdf);
  static ScalarDistribution point_mass(double value);
  static ScalarDistribution custom(std::function<double(double)> cdf,
                                   std::function<double(double)> pdf,
                                   std::function<double(std::mt19937_64&)> sample);
};

}  // namespace rsimle
