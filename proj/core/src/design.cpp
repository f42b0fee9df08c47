#include "btf/design.hpp"

#include <stdexcept>
#include <string>

namespace btf {

LaggedDesign::LaggedDesign(std::vector<Predictor> predictors, std::vector<Count> responses,
                           std::vector<int> labels, std::vector<std::size_t> times)
    : predictors_(std::move(predictors)), responses_(std::move(responses)),
      labels_(std::move(labels)), times_(std::move(times)) {
  if (labels_.size() != responses_.size() * predictors_.size()) {
    throw std::invalid_argument("design label matrix has wrong size");
  }
  if (!times_.empty() && times_.size() != responses_.size()) {
    throw std::invalid_argument("design time index has wrong size");
  }
  for (std::size_t i = 0; i < responses_.size(); ++i) {
    for (std::size_t p = 0; p < predictors_.size(); ++p) {
      const int l = label(i, p);
      if (l < 0 || l >= predictors_[p].levels) {
        throw std::out_of_range("label " + std::to_string(l) + " outside [0," +
                                std::to_string(predictors_[p].levels) + ") for predictor " +
                                std::to_string(p));
      }
    }
  }
}

std::vector<int> LaggedDesign::level_counts() const {
  std::vector<int> levels;
  levels.reserve(predictors_.size());
  for (const auto& p : predictors_) {
    levels.push_back(p.levels);
  }
  return levels;
}

LaggedDesign build_design(const CountSeries& series, std::span<const LabelRule> rules,
                          std::size_t target, std::size_t max_lag, std::size_t begin,
                          std::size_t end) {
  const std::size_t M = series.num_series();
  if (rules.size() != M) {
    throw std::invalid_argument("need one label rule per series");
  }
  if (target >= M) {
    throw std::out_of_range("target series out of range");
  }
  if (begin < max_lag || end > series.length() || begin > end) {
    throw std::out_of_range("design window [" + std::to_string(begin) + "," +
                            std::to_string(end) + ") incompatible with q=" +
                            std::to_string(max_lag));
  }
  std::vector<Predictor> predictors;
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t j = 1; j <= max_lag; ++j) {
      predictors.push_back({m, static_cast<int>(j), static_cast<int>(rules[m].levels())});
    }
  }
  std::vector<Count> responses;
  std::vector<int> labels;
  std::vector<std::size_t> times;
  responses.reserve(end - begin);
  labels.reserve((end - begin) * predictors.size());
  for (std::size_t t = begin; t < end; ++t) {
    responses.push_back(series.at(target, t));
    times.push_back(t);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t j = 1; j <= max_lag; ++j) {
        labels.push_back(rules[m].label(series.at(m, t - j)));
      }
    }
  }
  return LaggedDesign(std::move(predictors), std::move(responses), std::move(labels),
                      std::move(times));
}

LaggedDesign training_design(const CountSeries& series, std::span<const LabelRule> rules,
                             std::size_t target, const DataSplit& split) {
  return build_design(series, rules, target, split.max_lag, split.likelihood_begin(),
                      split.likelihood_end());
}

LaggedDesign test_design(const CountSeries& series, std::span<const LabelRule> rules,
                         std::size_t target, const DataSplit& split) {
  return build_design(series, rules, target, split.max_lag, split.test_begin(),
                      split.test_begin() + split.test_len);
}

} // namespace btf
