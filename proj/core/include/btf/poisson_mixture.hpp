#pragma once

// Pre-training step: a c-component Poisson mixture fitted by Gibbs sampling,
// and the deterministic count -> label rule derived from it.

#include "btf/core.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace btf {

struct MixtureTraceRow {
  std::size_t iter = 0;
  std::vector<double> weights;
  std::vector<double> rates;
};

/// Fitted mixture. Components are stored in increasing-rate order.
struct MixtureFit {
  std::vector<double> weights;
  std::vector<double> rates;
  std::vector<MixtureTraceRow> trace;
  std::vector<std::string> warnings;

  std::size_t components() const { return rates.size(); }
};

struct MixtureOptions {
  std::size_t components = 10;
  std::size_t burnin = 2000;
  std::size_t iters = 5000;
  bool keep_trace = false;

  bool operator==(const MixtureOptions&) const = default;
};

/// One Gibbs chain for the finite Poisson mixture under mu_i ~ Gamma(1,1),
/// w ~ Dirichlet(1,...,1). The chain state is never reordered; canonical
/// ordering is applied only when summarising.
class MixtureGibbs {
public:
  MixtureGibbs(std::span<const Count> data, std::size_t components, Rng& rng);

  /// labels -> weights -> rates.
  void sweep(Rng& rng);

  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& rates() const { return rates_; }

private:
  std::span<const Count> data_;
  std::vector<int> labels_;
  std::vector<double> weights_;
  std::vector<double> rates_;
  std::vector<double> scratch_;
};

/// Runs burnin + iters sweeps and reports posterior means over the retained
/// sweeps, each sweep sorted by rate before accumulation.
MixtureFit fit_mixture(std::span<const Count> data, const MixtureOptions& options, Rng& rng);

/// Drops components with weight < min_weight, merges neighbours whose rates
/// differ by less than rate_merge_tol relative to the smaller rate, then
/// renormalises. Traces are not carried over.
MixtureFit select_components(const MixtureFit& fit, double min_weight = 0.01,
                             double rate_merge_tol = 0.10);

/// Maps any count to argmax_i PD(y; mu_i), lowest index on ties.
class LabelRule {
public:
  LabelRule() = default;
  explicit LabelRule(std::vector<double> rates);
  explicit LabelRule(const MixtureFit& fit) : LabelRule(fit.rates) {}

  int operator()(Count y) const { return label(y); }
  int label(Count y) const;
  std::size_t levels() const { return rates_.size(); }
  const std::vector<double>& rates() const { return rates_; }

private:
  std::vector<double> rates_;
  std::vector<double> log_rates_;
};

} // namespace btf
