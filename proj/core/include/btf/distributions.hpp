#pragma once

// Log-density kernels and random variates shared by every sampler.
// Gamma distributions use the (shape, rate) parameterisation: mean shape/rate.

#include "btf/core.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace btf {

/// ln Gamma(x) for x > 0; reentrant.
double log_gamma(double x);

/// ln(y!) from a precomputed table for small y, lgamma beyond.
double log_factorial(Count y);

/// y ln(lambda) - lambda - ln(y!). Throws std::invalid_argument for
/// lambda <= 0 or y < 0.
double poisson_log_pmf(Count y, double lambda);

/// Overflow-safe ln sum exp(v_i). Returns -inf when every value is -inf.
/// Throws std::invalid_argument on empty input.
double log_sum_exp(std::span<const double> values);

double sample_normal(Rng& rng);
double sample_gamma(double shape, double rate, Rng& rng);
/// ln of a Gamma(shape, 1) variate; stays finite for tiny shapes.
double sample_log_gamma(double shape, Rng& rng);
double sample_beta(double a, double b, Rng& rng);
Count sample_poisson(double mean, Rng& rng);

/// Writes a Dirichlet(concentrations) draw into `out` (same length).
void sample_dirichlet(std::span<const double> concentrations, Rng& rng, std::span<double> out);
std::vector<double> sample_dirichlet(std::span<const double> concentrations, Rng& rng);

/// Index drawn with probability proportional to exp(log_weights[i]).
/// Throws std::invalid_argument if every weight is -inf.
std::size_t sample_categorical(std::span<const double> log_weights, Rng& rng);

/// Index drawn with probability proportional to nonnegative weights.
std::size_t sample_discrete(std::span<const double> weights, Rng& rng);

} // namespace btf
