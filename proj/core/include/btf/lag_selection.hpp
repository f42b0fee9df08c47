#pragma once

// Stochastic search over the per-predictor cluster counts K = {k_j} and the
// partitions C of each predictor's label levels. Cell rates are integrated
// out against their Gamma(a, b) prior, so every move is scored by a closed
// form Gamma-Poisson marginal likelihood.

#include "btf/core.hpp"
#include "btf/design.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace btf {

/// For each predictor, an assignment of label levels to clusters [0, k).
struct Partition {
  std::vector<std::vector<int>> assign;
  std::vector<int> k;

  /// Every predictor with all levels in a single cluster.
  static Partition trivial(std::span<const int> levels);

  std::size_t predictors() const { return k.size(); }
  int levels(std::size_t p) const { return static_cast<int>(assign[p].size()); }
  std::vector<int> cluster_sizes(std::size_t p) const;
  /// Number of clusters with at least two levels.
  int splittable_clusters(std::size_t p) const;

  /// Relabels clusters of every predictor in order of first appearance.
  Partition canonical() const;
  /// Throws std::logic_error when a cluster is empty or k is out of range.
  void validate() const;

  bool operator==(const Partition&) const = default;
};

struct CellCount {
  std::uint64_t cell = 0;
  std::int64_t n = 0;
  std::int64_t sum = 0;
};

/// Nonempty cells of the partition-induced cell space, by increasing index.
struct CellStatistics {
  CellIndex index;
  std::vector<CellCount> cells;
};

CellStatistics cell_statistics(const LaggedDesign& design, const Partition& partition,
                               std::uint64_t cell_cap = Hyperparams{}.cell_cap);

/// ln p(y | C): product over nonempty cells of the Gamma(a, b)-Poisson
/// marginal. Empty cells contribute zero.
double log_marginal(const LaggedDesign& design, const Partition& partition, double a, double b,
                    std::uint64_t cell_cap = Hyperparams{}.cell_cap);

/// Per-cell term a ln b - ln G(a) + ln G(a + S) - (a + S) ln(n + b),
/// excluding the data-only sum of ln(y!).
double log_cell_marginal(std::int64_t n, std::int64_t sum, double a, double b);

/// Cached evaluator for repeated marginal-likelihood calls on one design.
class MarginalLikelihood {
public:
  MarginalLikelihood(const LaggedDesign& design, double a, double b,
                     std::uint64_t cell_cap = Hyperparams{}.cell_cap);

  double operator()(const Partition& partition);

private:
  struct Pattern {
    std::vector<int> labels;
    std::int64_t n = 0;
    std::int64_t sum = 0;
  };

  std::vector<Pattern> patterns_;
  double a_, b_;
  std::uint64_t cap_;
  double log_factorial_total_ = 0.0;
  double cell_constant_ = 0.0;
  std::vector<std::int64_t> dense_n_, dense_sum_;
  std::vector<std::uint64_t> touched_;
  std::vector<std::pair<std::uint64_t, std::size_t>> sparse_;
};

/// log prior of k clusters on a predictor at `lag` with `levels` label
/// levels: -phi * lag * k minus the log number of set partitions into k
/// blocks, so that partitions are uniform given k and k alone has mass
/// proportional to exp(-phi * lag * k).
double log_k_prior(int k, int levels, int lag, double phi);

/// ln S(n, k), Stirling numbers of the second kind.
double log_stirling2(int n, int k);

/// Probability of proposing a split (resp. merge) from k clusters out of c.
double split_move_probability(int k, int levels);
double merge_move_probability(int k, int levels);

struct Proposal {
  Partition next;
  double log_proposal_ratio = 0.0; // ln q(next -> current) - ln q(current -> next)
};

/// Moves `moved` levels (a nonempty proper subset of `cluster`) into a new
/// cluster labelled k.
Partition apply_split(const Partition& partition, std::size_t p, int cluster,
                      std::span<const int> moved);
/// Merges clusters r1 != r2; the highest label is recycled to keep labels
/// contiguous.
Partition apply_merge(const Partition& partition, std::size_t p, int r1, int r2);

double split_log_proposal_ratio(const Partition& partition, std::size_t p, int cluster);
double merge_log_proposal_ratio(const Partition& partition, std::size_t p, int r1, int r2);

/// Uniform splittable cluster, then a uniform unordered bipartition into
/// two nonempty halves. Requires k < levels.
Proposal propose_split(const Partition& partition, std::size_t p, Rng& rng);
/// Uniform unordered pair of clusters. Requires k >= 2.
Proposal propose_merge(const Partition& partition, std::size_t p, Rng& rng);

struct LagSelectionOptions {
  std::size_t burnin = 1000;
  std::size_t iters = 2000;
  /// When false the likelihood is dropped and the chain targets the prior.
  bool use_likelihood = true;

  bool operator==(const LagSelectionOptions&) const = default;
};

struct KTrace {
  std::vector<std::vector<int>> k; // one row per retained iteration
  std::size_t split_proposed = 0, split_accepted = 0;
  std::size_t merge_proposed = 0, merge_accepted = 0;
  std::size_t cap_rejections = 0;

  /// Fraction of retained iterations with k_p > 1, per predictor.
  std::vector<double> inclusion_proportions() const;
};

struct LagSelectionResult {
  KTrace trace;
  Partition mode; // most visited K, with per-predictor modal partition given its k
  std::vector<double> inclusion;
};

LagSelectionResult sample_K(const LaggedDesign& design, const Hyperparams& hyper,
                            const LagSelectionOptions& options, Rng& rng);

} // namespace btf
