#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's closed forms; each oracle recomputes from first principles.

#include "btf/core.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

inline double lgam(double x) { return std::lgamma(x); }

inline double log_poisson(std::int64_t y, double lambda) {
  return static_cast<double>(y) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(y) + 1.0);
}

/// ln of integral_0^inf prod_i PD(y_i; l) Gamma(l; a, b) dl by adaptive
/// quadrature, rescaled around the integrand's mode.
inline double log_gamma_poisson_quadrature(std::span<const std::int64_t> ys, double a, double b) {
  double S = 0.0;
  for (auto y : ys) S += static_cast<double>(y);
  const double n = static_cast<double>(ys.size());
  auto log_f = [&](double l) {
    double v = a * std::log(b) - lgam(a) + (a - 1.0) * std::log(l) - b * l;
    for (auto y : ys) v += log_poisson(y, l);
    return v;
  };
  const double mode = std::max((a + S - 1.0) / (n + b), 1e-3);
  const double peak = log_f(mode);
  auto f = [&](double l) { return l <= 0.0 ? 0.0 : std::exp(log_f(l) - peak); };
  boost::math::quadrature::tanh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;
  const double split = 2.0 * mode;
  const double lower = inner.integrate(f, 0.0, split, 1e-14);
  const double upper = outer.integrate([&](double u) { return f(split + u); }, 0.0,
                                       std::numeric_limits<double>::infinity(), 1e-14);
  return peak + std::log(lower + upper);
}

/// Probability mass function of k under p(k) ~ exp(-phi * lag * k), k in [1, c].
inline std::vector<double> k_prior(int c, int lag, double phi) {
  std::vector<double> p(static_cast<std::size_t>(c));
  double z = 0.0;
  for (int k = 1; k <= c; ++k) z += p[k - 1] = std::exp(-phi * lag * k);
  for (double& v : p) v /= z;
  return p;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

/// Pearson chi-square statistic of observed counts against probabilities.
inline double chi_square(std::span<const double> counts, std::span<const double> probs) {
  double total = 0.0;
  for (double c : counts) total += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    const double e = total * probs[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  return stat;
}

/// Upper 1e-4 quantile of chi-square, generous enough for fixed-seed tests.
inline double chi_square_bound(std::size_t dof) {
  return static_cast<double>(dof) + 9.0 * std::sqrt(2.0 * static_cast<double>(dof)) + 10.0;
}

/// ln Beta(a, b).
inline double lbeta(double a, double b) { return lgam(a) + lgam(b) - lgam(a + b); }

} // namespace oracle
