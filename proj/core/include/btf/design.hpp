#pragma once

// Labelled lag contexts D_t = (d_{p,t}) for a target series: one row per
// response time t, one column per predictor p. Predictors are ordered
// (series 0 lags 1..q, series 1 lags 1..q, ...).

#include "btf/core.hpp"
#include "btf/poisson_mixture.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace btf {

struct Predictor {
  std::size_t series = 0;
  int lag = 1;    // 1-based lag; drives the exp(-phi * lag * k) prior
  int levels = 1; // number of label levels c_p
};

class LaggedDesign {
public:
  LaggedDesign() = default;
  LaggedDesign(std::vector<Predictor> predictors, std::vector<Count> responses,
               std::vector<int> labels, std::vector<std::size_t> times = {});

  std::size_t size() const { return responses_.size(); }
  std::size_t predictors() const { return predictors_.size(); }
  const Predictor& predictor(std::size_t p) const { return predictors_[p]; }
  const std::vector<Predictor>& predictor_info() const { return predictors_; }

  Count response(std::size_t i) const { return responses_[i]; }
  std::span<const Count> responses() const { return responses_; }
  int label(std::size_t i, std::size_t p) const { return labels_[i * predictors_.size() + p]; }
  std::span<const int> context(std::size_t i) const {
    return {labels_.data() + i * predictors_.size(), predictors_.size()};
  }
  /// Absolute time index of response i (empty when built by hand).
  const std::vector<std::size_t>& times() const { return times_; }

  std::vector<int> level_counts() const;

private:
  std::vector<Predictor> predictors_;
  std::vector<Count> responses_;
  std::vector<int> labels_;
  std::vector<std::size_t> times_;
};

/// Builds contexts for response times t in [begin, end) of series `target`,
/// labelling y_{m,t-lag} with rules[m]. Requires begin >= q.
LaggedDesign build_design(const CountSeries& series, std::span<const LabelRule> rules,
                          std::size_t target, std::size_t max_lag, std::size_t begin,
                          std::size_t end);

/// Training design: t in [T1 + q, T1 + T2).
LaggedDesign training_design(const CountSeries& series, std::span<const LabelRule> rules,
                             std::size_t target, const DataSplit& split);

/// Test design: t in [T1 + T2, T), lags may reach back into training.
LaggedDesign test_design(const CountSeries& series, std::span<const LabelRule> rules,
                         std::size_t target, const DataSplit& split);

} // namespace btf
