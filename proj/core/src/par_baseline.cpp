#include "btf/par_baseline.hpp"

#include "btf/distributions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace btf {

namespace {

constexpr double kMaxEta = 700.0;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
as_matrix(const ParDesign& d) {
  return {d.x.data(), static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.columns())};
}

} // namespace

std::vector<std::string> ParStructure::coefficient_names(
    const std::vector<std::string>& series_names) const {
  std::vector<std::string> names{"beta_0"};
  for (std::size_t i = 1; i <= order; ++i) {
    names.push_back("beta_" + std::to_string(i));
  }
  for (std::size_t m : cross_series) {
    names.push_back("zeta_" + (m < series_names.size() ? series_names[m] : std::to_string(m)));
  }
  return names;
}

ParStructure par_structure(const CountSeries& series, std::size_t target, std::size_t order,
                           bool cross_terms) {
  if (target >= series.num_series()) {
    throw std::out_of_range("target series out of range");
  }
  ParStructure s;
  s.target = target;
  s.order = order;
  if (cross_terms) {
    for (std::size_t m = 0; m < series.num_series(); ++m) {
      if (m != target) {
        s.cross_series.push_back(m);
      }
    }
  }
  return s;
}

ParDesign build_par_design(const CountSeries& series, const ParStructure& structure,
                           std::size_t begin, std::size_t end) {
  if (begin < structure.min_history() || end > series.length() || begin > end) {
    throw std::out_of_range("PAR design window incompatible with model order");
  }
  ParDesign d;
  d.structure = structure;
  const std::size_t p = structure.parameters();
  d.y.reserve(end - begin);
  d.x.reserve((end - begin) * p);
  for (std::size_t t = begin; t < end; ++t) {
    const Count y = series.at(structure.target, t);
    d.y.push_back(static_cast<double>(y));
    d.log_factorials.push_back(log_factorial(y));
    d.x.push_back(1.0);
    for (std::size_t i = 1; i <= structure.order; ++i) {
      d.x.push_back(std::log(static_cast<double>(series.at(structure.target, t - i)) + 1.0));
    }
    for (std::size_t m : structure.cross_series) {
      d.x.push_back(static_cast<double>(series.at(m, t - 1)));
    }
  }
  return d;
}

double par_log_likelihood(const ParDesign& design, std::span<const double> coef) {
  double total = 0.0;
  for (std::size_t i = 0; i < design.size(); ++i) {
    const double eta = dot(design.row(i), coef);
    if (eta > kMaxEta) {
      return -std::numeric_limits<double>::infinity();
    }
    total += design.y[i] * eta - std::exp(eta) - design.log_factorials[i];
  }
  return total;
}

MleResult fit_mle(const ParDesign& design, double tol, std::size_t max_iter) {
  const auto p = static_cast<Eigen::Index>(design.columns());
  const auto n = static_cast<Eigen::Index>(design.size());
  if (n <= p) {
    throw std::invalid_argument("PAR fit needs more observations than parameters");
  }
  const auto X = as_matrix(design);
  const Eigen::Map<const Eigen::VectorXd> y(design.y.data(), n);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  beta[0] = std::log(y.mean() + 0.1);
  MleResult result;
  auto loglik = [&](const Eigen::VectorXd& b) {
    return par_log_likelihood(design, std::span<const double>(b.data(), static_cast<std::size_t>(p)));
  };
  double current = loglik(beta);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    result.iterations = it;
    const Eigen::VectorXd eta = X * beta;
    const Eigen::VectorXd mu = eta.array().min(kMaxEta).exp();
    // Newton step for the canonical link: (X' W X) delta = X' (y - mu).
    const Eigen::MatrixXd info = X.transpose() * mu.asDiagonal() * X;
    const Eigen::VectorXd score = X.transpose() * (y - mu);
    const Eigen::VectorXd delta = info.ldlt().solve(score);
    double step = 1.0;
    Eigen::VectorXd candidate = beta + delta;
    double next = loglik(candidate);
    while (!(next >= current) && step > 1e-8) {
      step *= 0.5;
      candidate = beta + step * delta;
      next = loglik(candidate);
    }
    if (!(next >= current)) {
      break;
    }
    const double change = std::abs(next - current) / (std::abs(current) + 1e-300);
    beta = candidate;
    current = next;
    if (beta.cwiseAbs().maxCoeff() > 50.0) {
      result.diverged = true;
      break;
    }
    // Under separation the likelihood flattens while beta keeps drifting, so
    // a small change alone is not convergence.
    if (change < tol && step * delta.cwiseAbs().maxCoeff() < 1e-3) {
      result.converged = true;
      break;
    }
  }
  result.coef.assign(beta.data(), beta.data() + p);
  result.log_likelihood = current;
  result.diverged = result.diverged || beta.cwiseAbs().maxCoeff() > 50.0;
  return result;
}

MleResult fit_mle(std::span<const Count> series, std::size_t order) {
  const auto data = CountSeries::univariate({series.begin(), series.end()});
  const auto structure = par_structure(data, 0, order, false);
  return fit_mle(build_par_design(data, structure, order, data.length()));
}

OrderSelection select_order(const CountSeries& series, std::size_t target, bool cross_terms,
                            std::size_t begin, std::size_t end, std::size_t q_max,
                            Criterion criterion) {
  if (q_max < 1) {
    throw std::invalid_argument("maximum order must be at least 1");
  }
  OrderSelection out;
  out.window_begin = begin + q_max;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t q = 1; q <= q_max; ++q) {
    const auto structure = par_structure(series, target, q, cross_terms);
    const auto design = build_par_design(series, structure, out.window_begin, end);
    const auto fit = fit_mle(design);
    const double k = static_cast<double>(structure.parameters());
    const double n = static_cast<double>(design.size());
    const double penalty = criterion == Criterion::AIC ? 2.0 * k : k * std::log(n);
    const double score = penalty - 2.0 * fit.log_likelihood;
    out.scores.push_back(score);
    if (score < best) {
      best = score;
      out.order = q;
    }
  }
  return out;
}

double log_posterior(const ParDesign& design, std::span<const double> coef,
                     const ParChainOptions& options) {
  double prior = -0.5 * options.intercept_precision * coef[0] * coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) {
    prior -= 0.5 * options.slope_precision * coef[i] * coef[i];
  }
  return par_log_likelihood(design, coef) + prior;
}

std::vector<double> ParChainResult::posterior_mean() const {
  if (draws.empty()) {
    return {};
  }
  std::vector<double> mean(draws.front().size(), 0.0);
  for (const auto& d : draws) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      mean[i] += d[i];
    }
  }
  for (double& m : mean) {
    m /= static_cast<double>(draws.size());
  }
  return mean;
}

std::vector<double> ParChainResult::posterior_sd() const {
  if (draws.size() < 2) {
    return std::vector<double>(draws.empty() ? 0 : draws.front().size(), 0.0);
  }
  const auto mean = posterior_mean();
  std::vector<double> var(mean.size(), 0.0);
  for (const auto& d : draws) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      var[i] += (d[i] - mean[i]) * (d[i] - mean[i]);
    }
  }
  for (double& v : var) {
    v = std::sqrt(v / static_cast<double>(draws.size() - 1));
  }
  return var;
}

ParChainResult mh_chain(const ParDesign& design, const ParChainOptions& options, Rng& rng) {
  const auto p = static_cast<Eigen::Index>(design.columns());
  const auto X = as_matrix(design);
  const auto mle = fit_mle(design);

  ParChainResult result;
  result.structure = design.structure;
  if (!mle.converged) {
    result.warnings.push_back("MLE did not converge; chain started at best iterate");
  }

  Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(mle.coef.data(), p);
  const Eigen::VectorXd mu = (X * beta).array().min(kMaxEta).exp();
  Eigen::MatrixXd precision = X.transpose() * mu.asDiagonal() * X;
  precision(0, 0) += options.intercept_precision;
  for (Eigen::Index i = 1; i < p; ++i) {
    precision(i, i) += options.slope_precision;
  }
  const Eigen::MatrixXd cov = precision.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();

  double log_scale = std::log(2.38 / std::sqrt(static_cast<double>(p)));
  auto span_of = [&](const Eigen::VectorXd& v) {
    return std::span<const double>(v.data(), static_cast<std::size_t>(p));
  };
  double current = log_posterior(design, span_of(beta), options);
  Eigen::VectorXd noise(p);
  std::size_t batch_accepts = 0, batch = 0, accepted = 0;
  constexpr std::size_t kBatch = 50;

  result.draws.reserve(options.iters);
  for (std::size_t it = 0; it < options.burnin + options.iters; ++it) {
    for (Eigen::Index i = 0; i < p; ++i) {
      noise[i] = sample_normal(rng);
    }
    const Eigen::VectorXd proposal = beta + std::exp(log_scale) * (chol * noise);
    const double candidate = log_posterior(design, span_of(proposal), options);
    const double log_alpha = candidate - current;
    const bool accept = log_alpha >= 0.0 || std::log(rng.uniform()) < log_alpha;
    if (accept) {
      beta = proposal;
      current = candidate;
    }
    if (it < options.burnin) {
      batch_accepts += accept ? 1 : 0;
      if ((it + 1) % kBatch == 0) {
        ++batch;
        const double rate = static_cast<double>(batch_accepts) / kBatch;
        log_scale += (rate - options.target_acceptance) / std::sqrt(static_cast<double>(batch));
        batch_accepts = 0;
      }
      continue;
    }
    accepted += accept ? 1 : 0;
    result.draws.emplace_back(beta.data(), beta.data() + p);
  }
  result.acceptance_rate =
      options.iters ? static_cast<double>(accepted) / static_cast<double>(options.iters) : 0.0;
  if (options.iters && (result.acceptance_rate < 0.05 || result.acceptance_rate > 0.6)) {
    result.warnings.push_back("acceptance rate " + std::to_string(result.acceptance_rate) +
                              " outside [0.05, 0.6]");
  }
  return result;
}

double par_rate(std::span<const double> coef, std::span<const double> row) {
  return std::exp(std::min(dot(coef, row), kMaxEta));
}

double par_transition_pmf(std::span<const double> coef, std::span<const double> row, Count y) {
  return std::exp(poisson_log_pmf(y, par_rate(coef, row)));
}

} // namespace btf
