#pragma once

// Log predictive scores, predictive traces and comparison tables.

#include "btf/btf_gibbs.hpp"
#include "btf/core.hpp"
#include "btf/design.hpp"
#include "btf/lag_selection.hpp"
#include "btf/par_baseline.hpp"
#include "btf/poisson_mixture.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace btf {

inline constexpr double kProbabilityFloor = 1e-300;

/// Running sum of -ln p over (test point, draw) pairs.
class ScoreAccumulator {
public:
  void add(double probability);
  double score() const;
  std::size_t terms() const { return terms_; }
  /// Probabilities raised to the floor.
  std::size_t floored() const { return floored_; }

private:
  double total_ = 0.0;
  std::size_t terms_ = 0;
  std::size_t floored_ = 0;
};

struct ScoreResult {
  double score = 0.0;
  std::size_t points = 0;
  std::size_t draws = 0;
  std::size_t floored = 0;
};

/// -sum_t sum_i ln p_i(y_t) / (T N); probabilities[t][i]. Throws on empty
/// input or ragged rows.
ScoreResult log_predictive_score(const std::vector<std::vector<double>>& probabilities);

struct TracePoint {
  std::size_t t = 0;
  Count y = 0;
  double mean = 0.0;
  Count lo = 0;
  Count hi = 0;
};

struct Evaluation {
  ScoreResult score;
  std::vector<TracePoint> trace; // empty unless requested
};

/// One-step-ahead score over the test segment of `target`. Contexts are
/// labelled from the observed history, including earlier test points.
Evaluation score_btf(std::span<const PosteriorDraw> draws, std::span<const LabelRule> rules,
                     const CountSeries& series, std::size_t target, const DataSplit& split,
                     bool with_trace = false, double level = 0.95);

Evaluation score_btf(std::span<const PosteriorDraw> draws, const LaggedDesign& test,
                     bool with_trace = false, double level = 0.95);

/// Same estimator for the PAR baseline over t in [test_begin, T).
Evaluation score_par(const ParChainResult& chain, const CountSeries& series,
                     std::size_t test_begin, bool with_trace = false, double level = 0.95);

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

/// series,lag,proportion
void write_inclusion_csv(std::ostream& out, const LaggedDesign& design,
                         std::span<const double> inclusion,
                         const std::vector<std::string>& series_names);

/// iter,i,w,mu for one mixture fit kept with keep_trace.
void write_mixture_trace_csv(std::ostream& out, const MixtureFit& fit);

/// iter,series,lag,k: the cluster count of every predictor per retained
/// lag-selection iteration.
void write_ktrace_csv(std::ostream& out, const LaggedDesign& design, const KTrace& trace,
                      const std::vector<std::string>& series_names);

/// coefficient,mean,sd
void write_coefficient_csv(std::ostream& out, const ParChainResult& chain,
                           const std::vector<std::string>& series_names);

struct Summary {
  double mean = 0.0;
  double sd = 0.0; // sample (n - 1) sd; 0 for a single value
  std::size_t n = 0;
};

Summary summarise(std::span<const double> values);

/// Replicate scores for each model on one scenario/split row.
struct ComparisonRow {
  std::string label;
  std::vector<std::vector<double>> scores; // scores[model][replicate]
};

struct ComparisonTable {
  std::vector<std::string> models;
  std::vector<ComparisonRow> rows;

  /// Index of the model with the lowest mean score in a row.
  std::size_t winner(std::size_t row) const;
};

/// row,model,mean,sd,replicates,best
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
/// Aligned columns of "mean(sd)" with the best model marked by '*'.
void write_comparison_text(std::ostream& out, const ComparisonTable& table);

} // namespace btf
