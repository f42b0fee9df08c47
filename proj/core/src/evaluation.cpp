#include "btf/evaluation.hpp"

#include "btf/csv.hpp"
#include "btf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace btf {

void ScoreAccumulator::add(double probability) {
  if (!(probability >= kProbabilityFloor)) {
    probability = kProbabilityFloor;
    ++floored_;
  }
  total_ -= std::log(probability);
  ++terms_;
}

double ScoreAccumulator::score() const {
  if (terms_ == 0) {
    throw std::invalid_argument("score of an empty set");
  }
  return total_ / static_cast<double>(terms_);
}

ScoreResult log_predictive_score(const std::vector<std::vector<double>>& probabilities) {
  if (probabilities.empty() || probabilities.front().empty()) {
    throw std::invalid_argument("log predictive score needs at least one point and one draw");
  }
  ScoreAccumulator acc;
  const std::size_t draws = probabilities.front().size();
  for (const auto& row : probabilities) {
    if (row.size() != draws) {
      throw std::invalid_argument("every test point needs the same number of draws");
    }
    for (double p : row) acc.add(p);
  }
  return {acc.score(), probabilities.size(), draws, acc.floored()};
}

Evaluation score_btf(std::span<const PosteriorDraw> draws, const LaggedDesign& test,
                     bool with_trace, double level) {
  if (draws.empty() || test.size() == 0) {
    throw std::invalid_argument("BTF score needs draws and test points");
  }
  Evaluation ev;
  ScoreAccumulator acc;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto ctx = test.context(i);
    const Count y = test.response(i);
    double mean = 0.0;
    for (const auto& draw : draws) {
      acc.add(transition_pmf(draw, ctx, y));
      if (with_trace) mean += predictive_mean(draw, ctx);
    }
    if (with_trace) {
      const auto [lo, hi] = predictive_interval(draws, ctx, level);
      ev.trace.push_back({test.times().empty() ? i : test.times()[i], y,
                          mean / static_cast<double>(draws.size()), lo, hi});
    }
  }
  ev.score = {acc.score(), test.size(), draws.size(), acc.floored()};
  return ev;
}

Evaluation score_btf(std::span<const PosteriorDraw> draws, std::span<const LabelRule> rules,
                     const CountSeries& series, std::size_t target, const DataSplit& split,
                     bool with_trace, double level) {
  return score_btf(draws, test_design(series, rules, target, split), with_trace, level);
}

Evaluation score_par(const ParChainResult& chain, const CountSeries& series,
                     std::size_t test_begin, bool with_trace, double level) {
  if (chain.draws.empty() || test_begin >= series.length()) {
    throw std::invalid_argument("PAR score needs draws and test points");
  }
  const auto design = build_par_design(series, chain.structure, test_begin, series.length());
  Evaluation ev;
  ScoreAccumulator acc;
  std::vector<double> rates(chain.draws.size());
  for (std::size_t i = 0; i < design.size(); ++i) {
    const auto row = design.row(i);
    const auto y = static_cast<Count>(design.y[i]);
    double mean = 0.0;
    for (std::size_t d = 0; d < chain.draws.size(); ++d) {
      rates[d] = par_rate(chain.draws[d], row);
      acc.add(std::exp(poisson_log_pmf(y, rates[d])));
      mean += rates[d];
    }
    if (!with_trace) continue;
    mean /= static_cast<double>(rates.size());
    // Draw-averaged Poisson pmf up to a negligible tail.
    std::vector<double> pmf;
    double mass = 0.0;
    for (Count v = 0; mass < 1.0 - 1e-12 && v < 100000; ++v) {
      double p = 0.0;
      for (double r : rates) p += std::exp(poisson_log_pmf(v, r));
      p /= static_cast<double>(rates.size());
      pmf.push_back(p);
      mass += p;
      if (p == 0.0 && static_cast<double>(v) > 10.0 * mean + 100.0) break;
    }
    const auto [lo, hi] = highest_density_bounds(pmf, level);
    ev.trace.push_back({test_begin + i, y, mean, lo, hi});
  }
  ev.score = {acc.score(), design.size(), chain.draws.size(), acc.floored()};
  return ev;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  out << "t,y,mean,lo95,hi95\n";
  for (const auto& p : trace) {
    out << p.t << ',' << p.y << ',' << format_double(p.mean) << ',' << p.lo << ',' << p.hi << '\n';
  }
}

void write_inclusion_csv(std::ostream& out, const LaggedDesign& design,
                         std::span<const double> inclusion,
                         const std::vector<std::string>& series_names) {
  out << "series,lag,proportion\n";
  for (std::size_t p = 0; p < design.predictors() && p < inclusion.size(); ++p) {
    const auto& pred = design.predictor(p);
    const std::string name =
        pred.series < series_names.size() ? series_names[pred.series] : std::to_string(pred.series);
    out << name << ',' << pred.lag << ',' << format_double(inclusion[p]) << '\n';
  }
}

void write_mixture_trace_csv(std::ostream& out, const MixtureFit& fit) {
  out << "iter,i,w,mu\n";
  for (const auto& row : fit.trace) {
    for (std::size_t i = 0; i < row.rates.size(); ++i) {
      out << row.iter << ',' << i << ',' << format_double(row.weights[i]) << ','
          << format_double(row.rates[i]) << '\n';
    }
  }
}

void write_ktrace_csv(std::ostream& out, const LaggedDesign& design, const KTrace& trace,
                      const std::vector<std::string>& series_names) {
  out << "iter,series,lag,k\n";
  for (std::size_t it = 0; it < trace.k.size(); ++it) {
    for (std::size_t p = 0; p < trace.k[it].size(); ++p) {
      const auto& pred = design.predictor(p);
      out << it << ','
          << (pred.series < series_names.size() ? series_names[pred.series] : std::to_string(pred.series))
          << ',' << pred.lag << ',' << trace.k[it][p] << '\n';
    }
  }
}

void write_coefficient_csv(std::ostream& out, const ParChainResult& chain,
                           const std::vector<std::string>& series_names) {
  const auto names = chain.structure.coefficient_names(series_names);
  const auto mean = chain.posterior_mean();
  const auto sd = chain.posterior_sd();
  out << "coefficient,mean,sd\n";
  for (std::size_t i = 0; i < names.size() && i < mean.size(); ++i) {
    out << names[i] << ',' << format_double(mean[i]) << ',' << format_double(sd[i]) << '\n';
  }
}

Summary summarise(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::size_t ComparisonTable::winner(std::size_t row) const {
  const auto& r = rows.at(row);
  std::size_t best = 0;
  double best_mean = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < r.scores.size(); ++m) {
    const double mean = summarise(r.scores[m]).mean;
    if (!r.scores[m].empty() && mean < best_mean) {
      best_mean = mean;
      best = m;
    }
  }
  return best;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << "row,model,mean,sd,replicates,best\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t best = table.winner(r);
    for (std::size_t m = 0; m < row.scores.size(); ++m) {
      const auto s = summarise(row.scores[m]);
      out << row.label << ',' << table.models.at(m) << ',' << format_double(s.mean) << ','
          << format_double(s.sd) << ',' << s.n << ',' << (m == best ? 1 : 0) << '\n';
    }
  }
}

void write_comparison_text(std::ostream& out, const ComparisonTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"scenario"};
  header.insert(header.end(), table.models.begin(), table.models.end());
  cells.push_back(header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::vector<std::string> line{row.label};
    const std::size_t best = table.winner(r);
    for (std::size_t m = 0; m < row.scores.size(); ++m) {
      const auto s = summarise(row.scores[m]);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f(%.3f)%s", s.mean, s.sd, m == best ? "*" : "");
      line.emplace_back(buf);
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width;
  for (const auto& line : cells) {
    width.resize(std::max(width.size(), line.size()), 0);
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c + 1 == line.size()) {
        out << line[c] << '\n';
      } else {
        out << std::left << std::setw(static_cast<int>(width[c])) << line[c] << "  ";
      }
    }
  }
}

} // namespace btf
