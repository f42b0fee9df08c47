#pragma once

// Poisson autoregression baseline:
//   log lambda_t = beta_0 + sum_i beta_i log(y_{t-i} + 1) [+ sum_m zeta_m y_{m,t-1}]
// fitted by IRLS for order selection and by adaptive random-walk Metropolis
// for the posterior under independent normal priors.

#include "btf/core.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace btf {

/// Covariate layout of a PAR model.
struct ParStructure {
  std::size_t target = 0;
  std::size_t order = 1;
  /// Series entering as raw lag-1 cross terms (multivariate form).
  std::vector<std::size_t> cross_series;

  std::size_t parameters() const { return 1 + order + cross_series.size(); }
  /// Earliest time index with a complete history.
  std::size_t min_history() const { return std::max<std::size_t>(order, cross_series.empty() ? 0 : 1); }
  std::vector<std::string> coefficient_names(const std::vector<std::string>& series_names) const;

  bool operator==(const ParStructure&) const = default;
};

/// Univariate structure, or the multivariate form with every other series
/// as a lag-1 cross term.
ParStructure par_structure(const CountSeries& series, std::size_t target, std::size_t order,
                           bool cross_terms);

/// Row-major covariates for response times t in [begin, end).
struct ParDesign {
  ParStructure structure;
  std::vector<double> y;
  std::vector<double> x; // size() rows x parameters() columns
  std::vector<double> log_factorials;

  std::size_t size() const { return y.size(); }
  std::size_t columns() const { return structure.parameters(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * columns(), columns()};
  }
};

ParDesign build_par_design(const CountSeries& series, const ParStructure& structure,
                           std::size_t begin, std::size_t end);

double par_log_likelihood(const ParDesign& design, std::span<const double> coef);

struct MleResult {
  std::vector<double> coef;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false; // some |beta| > 50
};

/// IRLS on the Poisson log-link GLM; stops when the relative change of the
/// log-likelihood drops below `tol` or after `max_iter` iterations.
MleResult fit_mle(const ParDesign& design, double tol = 1e-10, std::size_t max_iter = 100);

/// Univariate convenience: fits PAR(q) to the whole series span.
MleResult fit_mle(std::span<const Count> series, std::size_t order);

enum class Criterion { AIC, BIC };

struct OrderSelection {
  std::size_t order = 1;
  std::vector<double> scores;   // criterion for orders 1..q_max
  std::size_t window_begin = 0; // common first response time
};

/// Compares orders 1..q_max on the common window t in [begin + q_max, end).
OrderSelection select_order(const CountSeries& series, std::size_t target, bool cross_terms,
                            std::size_t begin, std::size_t end, std::size_t q_max,
                            Criterion criterion);

struct ParChainOptions {
  std::size_t burnin = 5000;
  std::size_t iters = 10000;
  // Normal priors use precision: N(0, precision 1e-6) has variance 1e6.
  double intercept_precision = 1e-6;
  double slope_precision = 1e-4;
  double target_acceptance = 0.234;

  bool operator==(const ParChainOptions&) const = default;
};

struct ParChainResult {
  ParStructure structure;
  std::vector<std::vector<double>> draws;
  double acceptance_rate = 0.0;
  std::vector<std::string> warnings;

  std::vector<double> posterior_mean() const;
  std::vector<double> posterior_sd() const;
};

/// Adaptive random-walk Metropolis started at the MLE. The proposal covariance
/// is the inverse observed information at the MLE, its scale tuned during
/// burn-in towards the target acceptance rate and frozen afterwards.
ParChainResult mh_chain(const ParDesign& design, const ParChainOptions& options, Rng& rng);

double log_posterior(const ParDesign& design, std::span<const double> coef,
                     const ParChainOptions& options);

/// Poisson rate for the covariate row of one time point.
double par_rate(std::span<const double> coef, std::span<const double> row);

/// PD(y; lambda_t) for the history row.
double par_transition_pmf(std::span<const double> coef, std::span<const double> row, Count y);

} // namespace btf
