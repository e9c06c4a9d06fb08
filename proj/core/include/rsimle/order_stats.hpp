#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rsimle/distributions.hpp"

namespace rsimle {

using ScalarFn = std::function<double(double)>;

// CDF of the minimum of m i.i.d. draws: 1 - (1 - F(t))^m.
double min_cdf_transform(const ScalarFn& cdf, std::size_t m, double t);

// Density of that minimum: m * (1 - F(t))^(m-1) * f(t).
double min_pdf_transform(const ScalarFn& pdf, const ScalarFn& cdf, std::size_t m, double t);

// Empirical CDF of `trials` simulated minima of m draws from `dist`.
EmpiricalCdf monte_carlo_min_distance(const ScalarDistribution& dist, std::size_t m,
                                      std::size_t trials, std::uint64_t seed);

// Density ratio (n/m) * (1 - F(t))^(n-1) / (1 - F_tilde(t))^(m-1) comparing
// an n-sample minimum under F against an m-sample minimum under F_tilde.
// Throws std::domain_error where F_tilde(t) = 1 (the ratio is unbounded).
double phi_ratio(const ScalarFn& cdf, const ScalarFn& cdf_tilde, std::size_t n, std::size_t m,
                 double t);

// Density restricted to t <= truncation_point and renormalized by
// 1 / F(truncation_point).  Throws std::domain_error when that mass is zero.
double truncated_pdf(const ScalarFn& pdf, const ScalarFn& cdf, double truncation_point, double t);

// Pointwise |F(t) - (1 - (1 - F(t))^m)| over the grid: how far the plain CDF
// sits from the min-of-m CDF it is implicitly asked to match.
std::vector<double> misalignment_gap(const ScalarFn& cdf, std::size_t m,
                                     std::span<const double> grid);

// Kolmogorov-Smirnov distance sup_t |F_n(t) - F(t)|, evaluated at the jumps.
double ks_statistic(const EmpiricalCdf& empirical, const ScalarFn& cdf);

// Asymptotic 99% critical value for the one-sample KS statistic.
double ks_critical_value_99(std::size_t n);

// Recursive adaptive Simpson quadrature of f over [a, b].
double adaptive_simpson(const ScalarFn& f, double a, double b, double tol = 1e-10);

}  // namespace rsimle
