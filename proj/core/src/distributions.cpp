#include "btf/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace btf {

namespace {

constexpr std::size_t kFactorialTable = 4096;

const std::array<double, kFactorialTable>& factorial_table() {
  static const auto table = [] {
    std::array<double, kFactorialTable> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < kFactorialTable; ++i) {
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    }
    return t;
  }();
  return table;
}

} // namespace

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_factorial(Count y) {
  if (y < 0) {
    throw std::invalid_argument("log_factorial of a negative count");
  }
  if (static_cast<std::size_t>(y) < kFactorialTable) {
    return factorial_table()[static_cast<std::size_t>(y)];
  }
  return log_gamma(static_cast<double>(y) + 1.0);
}

double poisson_log_pmf(Count y, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("Poisson rate must be positive");
  }
  if (y < 0) {
    throw std::invalid_argument("Poisson count must be nonnegative");
  }
  return static_cast<double>(y) * std::log(lambda) - lambda - log_factorial(y);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp of an empty range");
  }
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) {
    return peak;
  }
  double total = 0.0;
  for (double v : values) {
    total += std::exp(v - peak);
  }
  return peak + std::log(total);
}

double sample_normal(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Marsaglia-Tsang squeeze for shape >= 1, unit rate.
double gamma_marsaglia_tsang(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

} // namespace

double sample_log_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("Gamma shape must be positive");
  }
  if (shape >= 1.0) {
    return std::log(gamma_marsaglia_tsang(shape, rng));
  }
  const double boosted = gamma_marsaglia_tsang(shape + 1.0, rng);
  return std::log(boosted) + std::log(rng.uniform()) / shape;
}

double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("Gamma rate must be positive");
  }
  if (shape >= 1.0) {
    return gamma_marsaglia_tsang(shape, rng) / rate;
  }
  return std::exp(sample_log_gamma(shape, rng)) / rate;
}

double sample_beta(double a, double b, Rng& rng) {
  const double la = sample_log_gamma(a, rng);
  const double lb = sample_log_gamma(b, rng);
  // x = Ga / (Ga + Gb) evaluated without forming the gammas.
  return 1.0 / (1.0 + std::exp(lb - la));
}

Count sample_poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) {
    throw std::invalid_argument("Poisson mean must be positive");
  }
  std::poisson_distribution<Count> dist(mean);
  return dist(rng);
}

void sample_dirichlet(std::span<const double> concentrations, Rng& rng, std::span<double> out) {
  if (concentrations.size() != out.size() || concentrations.empty()) {
    throw std::invalid_argument("Dirichlet output size mismatch");
  }
  for (std::size_t i = 0; i < concentrations.size(); ++i) {
    out[i] = sample_log_gamma(concentrations[i], rng);
  }
  const double norm = log_sum_exp(out);
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - norm);
    total += v;
  }
  for (double& v : out) {
    v /= total;
  }
}

std::vector<double> sample_dirichlet(std::span<const double> concentrations, Rng& rng) {
  std::vector<double> out(concentrations.size());
  sample_dirichlet(concentrations, rng, out);
  return out;
}

std::size_t sample_categorical(std::span<const double> log_weights, Rng& rng) {
  if (log_weights.empty()) {
    throw std::invalid_argument("categorical over an empty support");
  }
  const double peak = *std::max_element(log_weights.begin(), log_weights.end());
  if (!(peak > -std::numeric_limits<double>::infinity()) || std::isnan(peak)) {
    throw std::invalid_argument("categorical with all log-weights -inf");
  }
  double total = 0.0;
  for (double w : log_weights) {
    total += std::exp(w - peak);
  }
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double w = std::exp(log_weights[i] - peak);
    if (target < w) {
      return i;
    }
    target -= w;
  }
  // Rounding residue: return the last index carrying mass.
  for (std::size_t i = log_weights.size(); i-- > 0;) {
    if (log_weights[i] > -std::numeric_limits<double>::infinity()) {
      return i;
    }
  }
  return log_weights.size() - 1;
}

std::size_t sample_discrete(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("discrete distribution with zero total mass");
  }
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (target < weights[i]) {
      return i;
    }
    target -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) {
      return i;
    }
  }
  return weights.size() - 1;
}

} // namespace btf
