#include "btf/evaluation.hpp"

#include "btf/distributions.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace btf;

namespace {

PosteriorDraw two_atom_draw(double w0, double r0, double r1) {
  PosteriorDraw d;
  d.k = {2};
  d.levels = {2};
  d.pistar = {0.5, 0.5};
  d.lambdastar = {r0, r1};
  d.zstar = {0, 1};
  d.pi = {{w0, 1.0 - w0, 1.0 - w0, w0}};
  return d;
}

} // namespace

TEST(Score, SinglePointExamples) {
  EXPECT_NEAR(log_predictive_score({{std::exp(-2.0)}}).score, 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(log_predictive_score({{1.0, 1.0}}).score, 0.0);
  EXPECT_THROW(log_predictive_score({}), std::invalid_argument);
  EXPECT_THROW(log_predictive_score({{0.5}, {0.5, 0.5}}), std::invalid_argument);
}

TEST(Score, FloorsZeroProbabilities) {
  const auto r = log_predictive_score({{0.0, 1.0}});
  EXPECT_EQ(r.floored, 1u);
  EXPECT_NEAR(r.score, -std::log(kProbabilityFloor) / 2.0, 1e-9);
}

TEST(Score, EqualsEmpiricalCrossEntropy) {
  // A fixed Poisson predictor scored on a large sample from the same law
  // approaches its entropy.
  Rng rng(1);
  const double lambda = 4.0;
  std::vector<std::vector<double>> probs;
  for (int i = 0; i < 50000; ++i) {
    probs.push_back({std::exp(poisson_log_pmf(sample_poisson(lambda, rng), lambda))});
  }
  double entropy = 0.0;
  for (Count y = 0; y < 60; ++y) {
    const double p = std::exp(poisson_log_pmf(y, lambda));
    entropy -= p * std::log(p);
  }
  EXPECT_NEAR(log_predictive_score(probs).score, entropy, 0.02);
}

TEST(Score, InvariantToOrderAndDuplication) {
  Rng rng(2);
  std::vector<std::vector<double>> probs(30, std::vector<double>(4));
  for (auto& row : probs)
    for (auto& p : row) p = rng.uniform();
  const double base = log_predictive_score(probs).score;
  auto shuffled = probs;
  std::reverse(shuffled.begin(), shuffled.end());
  for (auto& row : shuffled) std::reverse(row.begin(), row.end());
  EXPECT_NEAR(log_predictive_score(shuffled).score, base, 1e-12);
  auto doubled = probs;
  for (auto& row : doubled) row.insert(row.end(), row.begin(), row.end());
  EXPECT_NEAR(log_predictive_score(doubled).score, base, 1e-12);
}

TEST(Score, BoundedByExtremeTerms) {
  const std::vector<std::vector<double>> probs{{0.2, 0.5}, {0.9, 0.1}};
  const double s = log_predictive_score(probs).score;
  EXPECT_GE(s, -std::log(0.9));
  EXPECT_LE(s, -std::log(0.1));
}

TEST(Score, BtfMatchesDirectSum) {
  const std::vector<PosteriorDraw> draws{two_atom_draw(0.8, 2.0, 9.0), two_atom_draw(0.6, 3.0, 7.0)};
  const LaggedDesign test({{0, 1, 2}}, {1, 8, 3, 6, 2}, {0, 1, 0, 1, 1}, {10, 11, 12, 13, 14});
  double total = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (const auto& d : draws) {
      const double w = d.kernel(0, test.label(i, 0), 0);
      const double p = w * std::exp(poisson_log_pmf(test.response(i), d.lambdastar[0])) +
                       (1 - w) * std::exp(poisson_log_pmf(test.response(i), d.lambdastar[1]));
      total -= std::log(p);
    }
  }
  const auto ev = score_btf(draws, test, true);
  EXPECT_NEAR(ev.score.score, total / 10.0, 1e-12);
  EXPECT_EQ(ev.score.points, 5u);
  EXPECT_EQ(ev.score.draws, 2u);
  ASSERT_EQ(ev.trace.size(), 5u);
  EXPECT_EQ(ev.trace[0].t, 10u);
  for (const auto& p : ev.trace) {
    EXPECT_LE(static_cast<double>(p.lo), p.mean);
    EXPECT_GE(static_cast<double>(p.hi), p.mean);
  }
}

TEST(Score, ParWithZeroSlopes) {
  ParChainResult chain;
  chain.structure = {0, 1, {}};
  chain.draws = {{std::log(3.0), 0.0}};
  const auto data = CountSeries::univariate({2, 3, 0, 4, 1});
  const auto ev = score_par(chain, data, 2, true);
  double total = 0.0;
  for (Count y : {0, 4, 1}) total -= poisson_log_pmf(y, 3.0);
  EXPECT_NEAR(ev.score.score, total / 3.0, 1e-12);
  ASSERT_EQ(ev.trace.size(), 3u);
  EXPECT_NEAR(ev.trace[1].mean, 3.0, 1e-12);
  EXPECT_EQ(ev.trace[1].t, 3u);
}

TEST(Summary, SampleStandardDeviation) {
  const std::vector<double> one{2.5};
  EXPECT_DOUBLE_EQ(summarise(one).sd, 0.0);
  const std::vector<double> two{1.0, 3.0};
  const auto s = summarise(two);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.sd, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s.n, 2u);
}

TEST(Report, TextAndCsv) {
  ComparisonTable t;
  t.models = {"PAR-AIC", "BTF"};
  t.rows.push_back({"row-1", {{1.0, 3.0}, {1.5, 1.5}}});
  t.rows.push_back({"r2", {{0.25}, {0.5}}});
  EXPECT_EQ(t.winner(0), 1u);
  EXPECT_EQ(t.winner(1), 0u);
  std::ostringstream text;
  write_comparison_text(text, t);
  EXPECT_EQ(text.str(),
            "scenario  PAR-AIC        BTF\n"
            "row-1     2.000(1.414)   1.500(0.000)*\n"
            "r2        0.250(0.000)*  0.500(0.000)\n");
  std::ostringstream csv;
  write_comparison_csv(csv, t);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "row,model,mean,sd,replicates,best");
}
