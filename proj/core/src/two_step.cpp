#include "btf/two_step.hpp"

#include "btf/design.hpp"

namespace btf {

Labelling fit_labelling(const CountSeries& series, const DataSplit& split,
                        const TwoStepOptions& options, const Rng& rng) {
  Labelling out;
  for (std::size_t m = 0; m < series.num_series(); ++m) {
    Rng child = rng.fork(m);
    const auto pre = series.series(m).subspan(0, split.pre_training_len);
    out.raw.push_back(fit_mixture(pre, options.mixture, child));
    out.selected.push_back(select_components(out.raw.back(), options.min_weight, options.merge_tol));
    out.rules.emplace_back(out.selected.back());
  }
  return out;
}

TargetFit fit_target(const CountSeries& series, std::span<const LabelRule> rules,
                     std::size_t target, const DataSplit& split, const Hyperparams& hyper,
                     const TwoStepOptions& options, const Rng& rng) {
  TargetFit fit;
  fit.target = target;
  fit.design = training_design(series, rules, target, split);
  fit.hyper = hyper.resolved(fit.design.responses());
  Rng lag_rng = rng.fork(2 * target);
  fit.lags = sample_K(fit.design, fit.hyper, options.lags, lag_rng);
  Rng chain_rng = rng.fork(2 * target + 1);
  fit.draws = run_chain(fit.design, fit.lags.mode, fit.hyper, options.chain, chain_rng);
  return fit;
}

} // namespace btf
