#include "btf/poisson_mixture.hpp"

#include "btf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace btf {

MixtureGibbs::MixtureGibbs(std::span<const Count> data, std::size_t components, Rng& rng)
    : data_(data), labels_(data.size(), 0), weights_(components, 1.0 / components),
      rates_(components), scratch_(components) {
  if (data.empty()) {
    throw std::invalid_argument("mixture fit needs at least one observation");
  }
  if (components == 0) {
    throw std::invalid_argument("mixture needs at least one component");
  }
  // Spread initial rates over the empirical quantiles.
  std::vector<Count> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < components; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(components);
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
    rates_[i] = static_cast<double>(sorted[idx]) + 0.5 + 0.01 * rng.uniform();
  }
}

void MixtureGibbs::sweep(Rng& rng) {
  const std::size_t c = rates_.size();
  std::vector<double> log_w(c), log_mu(c);
  for (std::size_t i = 0; i < c; ++i) {
    log_w[i] = std::log(weights_[i]);
    log_mu[i] = std::log(rates_[i]);
  }
  std::vector<double> n(c, 0.0), total(c, 0.0);
  for (std::size_t t = 0; t < data_.size(); ++t) {
    const double y = static_cast<double>(data_[t]);
    for (std::size_t i = 0; i < c; ++i) {
      scratch_[i] = log_w[i] + y * log_mu[i] - rates_[i];
    }
    const auto label = sample_categorical(scratch_, rng);
    labels_[t] = static_cast<int>(label);
    n[label] += 1.0;
    total[label] += y;
  }
  for (std::size_t i = 0; i < c; ++i) {
    scratch_[i] = 1.0 + n[i];
  }
  sample_dirichlet(scratch_, rng, weights_);
  for (std::size_t i = 0; i < c; ++i) {
    // Weights can underflow to zero for very small Dirichlet draws.
    weights_[i] = std::max(weights_[i], 1e-300);
    rates_[i] = std::max(sample_gamma(1.0 + total[i], 1.0 + n[i], rng), 1e-300);
  }
}

MixtureFit fit_mixture(std::span<const Count> data, const MixtureOptions& options, Rng& rng) {
  if (options.iters == 0) {
    throw std::invalid_argument("mixture fit needs at least one retained sweep");
  }
  MixtureGibbs chain(data, options.components, rng);
  const std::size_t c = options.components;
  MixtureFit fit;
  fit.weights.assign(c, 0.0);
  fit.rates.assign(c, 0.0);

  const std::set<Count> distinct(data.begin(), data.end());
  if (distinct.size() < c) {
    fit.warnings.push_back("component count " + std::to_string(c) + " exceeds the " +
                           std::to_string(distinct.size()) +
                           " distinct observed values; empty components follow the prior");
  }

  std::vector<std::size_t> order(c);
  for (std::size_t s = 0; s < options.burnin + options.iters; ++s) {
    chain.sweep(rng);
    if (s < options.burnin) {
      continue;
    }
    const auto& w = chain.weights();
    const auto& mu = chain.rates();
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return mu[x] < mu[y]; });
    MixtureTraceRow row;
    if (options.keep_trace) {
      row.iter = s - options.burnin;
      row.weights.resize(c);
      row.rates.resize(c);
    }
    for (std::size_t i = 0; i < c; ++i) {
      fit.weights[i] += w[order[i]];
      fit.rates[i] += mu[order[i]];
      if (options.keep_trace) {
        row.weights[i] = w[order[i]];
        row.rates[i] = mu[order[i]];
      }
    }
    if (options.keep_trace) {
      fit.trace.push_back(std::move(row));
    }
  }
  const double retained = static_cast<double>(options.iters);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    fit.rates[i] /= retained;
    fit.weights[i] /= retained;
    weight_sum += fit.weights[i];
  }
  for (double& w : fit.weights) {
    w /= weight_sum;
  }
  return fit;
}

MixtureFit select_components(const MixtureFit& fit, double min_weight, double rate_merge_tol) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < fit.components(); ++i) {
    if (fit.weights[i] >= min_weight) {
      kept.push_back(i);
    }
  }
  if (kept.empty()) {
    return fit;
  }
  std::sort(kept.begin(), kept.end(),
            [&](std::size_t x, std::size_t y) { return fit.rates[x] < fit.rates[y]; });

  MixtureFit out;
  out.warnings = fit.warnings;
  for (std::size_t i : kept) {
    const double w = fit.weights[i];
    const double mu = fit.rates[i];
    if (!out.rates.empty()) {
      double& group_w = out.weights.back();
      double& group_mu = out.rates.back();
      const double smaller = std::min(group_mu, mu);
      if (std::abs(mu - group_mu) < rate_merge_tol * smaller) {
        group_mu = (group_w * group_mu + w * mu) / (group_w + w);
        group_w += w;
        continue;
      }
    }
    out.weights.push_back(w);
    out.rates.push_back(mu);
  }
  const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  for (double& w : out.weights) {
    w /= total;
  }
  return out;
}

LabelRule::LabelRule(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) {
    throw std::invalid_argument("label rule needs at least one component");
  }
  for (double mu : rates_) {
    if (!(mu > 0.0)) {
      throw std::invalid_argument("label rule rates must be positive");
    }
    log_rates_.push_back(std::log(mu));
  }
}

int LabelRule::label(Count y) const {
  // ln PD(y; mu) up to the y-only term ln(y!).
  const double yd = static_cast<double>(y);
  int best = 0;
  double best_score = yd * log_rates_[0] - rates_[0];
  for (std::size_t i = 1; i < rates_.size(); ++i) {
    const double score = yd * log_rates_[i] - rates_[i];
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

} // namespace btf
