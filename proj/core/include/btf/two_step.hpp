#pragma once

// The two-step procedure: mixture labelling on the pre-training segment, lag
// selection and Gibbs sampling on the training segment.

#include "btf/btf_gibbs.hpp"
#include "btf/core.hpp"
#include "btf/lag_selection.hpp"
#include "btf/poisson_mixture.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <vector>

namespace btf {

struct TwoStepOptions {
  MixtureOptions mixture;
  double min_weight = 0.01;
  double merge_tol = 0.10;
  LagSelectionOptions lags;
  ChainOptions chain;

  bool operator==(const TwoStepOptions&) const = default;
};

struct Labelling {
  std::vector<MixtureFit> raw;      // per series, as sampled
  std::vector<MixtureFit> selected; // after dropping and merging components
  std::vector<LabelRule> rules;
};

/// Fits a mixture to each series' pre-training segment. Series m uses
/// rng.fork(m).
Labelling fit_labelling(const CountSeries& series, const DataSplit& split,
                        const TwoStepOptions& options, const Rng& rng);

struct TargetFit {
  std::size_t target = 0;
  Hyperparams hyper; // resolved
  LaggedDesign design;
  LagSelectionResult lags;
  std::vector<PosteriorDraw> draws;
};

/// Lag selection then the Gibbs chain for one target, using
/// rng.fork(2 * target) and rng.fork(2 * target + 1).
TargetFit fit_target(const CountSeries& series, std::span<const LabelRule> rules,
                     std::size_t target, const DataSplit& split, const Hyperparams& hyper,
                     const TwoStepOptions& options, const Rng& rng);

} // namespace btf
