#include "btf/poisson_mixture.hpp"

#include "btf/distributions.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace btf;

TEST(FitMixture, ConstantSequenceSingleComponent) {
  Rng rng(1);
  const std::vector<Count> y(1000, 5);
  MixtureOptions opt;
  opt.components = 1;
  opt.burnin = 200;
  opt.iters = 1000;
  const auto fit = fit_mixture(y, opt, rng);
  ASSERT_EQ(fit.components(), 1u);
  EXPECT_GE(fit.rates[0], 4.8);
  EXPECT_LE(fit.rates[0], 5.2);
  // Conjugate posterior mean (1 + 5000) / (1 + 1000).
  EXPECT_NEAR(fit.rates[0], 5001.0 / 1001.0, 0.01);
  EXPECT_DOUBLE_EQ(fit.weights[0], 1.0);
}

TEST(FitMixture, RecoversTwoWellSeparatedComponents) {
  Rng gen(21);
  std::vector<Count> y(3000);
  for (auto& v : y) v = sample_poisson(gen.uniform() < 0.5 ? 2.0 : 20.0, gen);
  Rng rng(22);
  MixtureOptions opt;
  opt.components = 2;
  opt.burnin = 500;
  opt.iters = 1500;
  const auto fit = fit_mixture(y, opt, rng);
  EXPECT_NEAR(fit.rates[0], 2.0, 0.2);
  EXPECT_NEAR(fit.rates[1], 20.0, 2.0);
  EXPECT_NEAR(fit.weights[0], 0.5, 0.05);
  EXPECT_NEAR(fit.weights[1], 0.5, 0.05);
}

TEST(FitMixture, InvariantsAndWarning) {
  Rng rng(3);
  const std::vector<Count> y{0, 1, 1, 4, 0, 2};
  MixtureOptions opt;
  opt.components = 6;
  opt.burnin = 50;
  opt.iters = 200;
  opt.keep_trace = true;
  const auto fit = fit_mixture(y, opt, rng);
  EXPECT_FALSE(fit.warnings.empty()); // 4 distinct values < 6 components
  EXPECT_NEAR(std::accumulate(fit.weights.begin(), fit.weights.end(), 0.0), 1.0, 1e-10);
  for (std::size_t i = 0; i < fit.components(); ++i) {
    EXPECT_GT(fit.rates[i], 0.0);
    if (i) EXPECT_LE(fit.rates[i - 1], fit.rates[i]);
  }
  ASSERT_EQ(fit.trace.size(), 200u);
  for (const auto& row : fit.trace) {
    for (std::size_t i = 1; i < row.rates.size(); ++i) ASSERT_LE(row.rates[i - 1], row.rates[i]);
  }
}

TEST(FitMixture, Deterministic) {
  const std::vector<Count> y{3, 8, 1, 0, 12, 7, 7, 2};
  MixtureOptions opt;
  opt.components = 3;
  opt.burnin = 20;
  opt.iters = 50;
  Rng a(9), b(9);
  const auto fa = fit_mixture(y, opt, a);
  const auto fb = fit_mixture(y, opt, b);
  EXPECT_EQ(fa.rates, fb.rates);
  EXPECT_EQ(fa.weights, fb.weights);
}

// With four observations and two components, the long-run label frequencies
// must match the exact posterior over all 16 labelings.
TEST(MixtureGibbs, LeavesExactPosteriorInvariant) {
  const std::vector<Count> y{0, 1, 6, 9};
  const int n = 4;
  std::vector<double> logp(16);
  for (int mask = 0; mask < 16; ++mask) {
    double counts[2] = {0, 0}, sums[2] = {0, 0};
    for (int t = 0; t < n; ++t) {
      const int c = (mask >> t) & 1;
      counts[c] += 1;
      sums[c] += static_cast<double>(y[t]);
    }
    // Dirichlet(1,1)-multinomial times Gamma(1,1)-Poisson marginals.
    double lp = std::lgamma(2.0) - std::lgamma(2.0 + n);
    for (int c = 0; c < 2; ++c) {
      lp += std::lgamma(1.0 + counts[c]);
      lp += std::lgamma(1.0 + sums[c]) - (1.0 + sums[c]) * std::log(1.0 + counts[c]);
    }
    logp[mask] = lp;
  }
  const double z = log_sum_exp(logp);
  std::vector<double> expected(16);
  for (int m = 0; m < 16; ++m) expected[m] = std::exp(logp[m] - z);

  Rng rng(77);
  MixtureGibbs chain(y, 2, rng);
  std::vector<double> freq(16, 0.0);
  const int sweeps = 400000;
  for (int s = 0; s < 1000; ++s) chain.sweep(rng);
  for (int s = 0; s < sweeps; ++s) {
    chain.sweep(rng);
    int mask = 0;
    for (int t = 0; t < n; ++t) mask |= chain.labels()[t] << t;
    freq[mask] += 1.0 / sweeps;
  }
  EXPECT_LT(oracle::total_variation(freq, expected), 0.02);
}

TEST(SelectComponents, DropsNegligibleWeights) {
  MixtureFit fit;
  fit.weights = {0.5 - 1e-4, 0.5 - 1e-4, 1e-4, 1e-4};
  fit.rates = {2.0, 20.0, 50.0, 90.0};
  const auto out = select_components(fit);
  ASSERT_EQ(out.components(), 2u);
  EXPECT_DOUBLE_EQ(out.rates[0], 2.0);
  EXPECT_DOUBLE_EQ(out.rates[1], 20.0);
  EXPECT_NEAR(out.weights[0] + out.weights[1], 1.0, 1e-15);
}

TEST(SelectComponents, MergesCloseRatesByWeightedMean) {
  MixtureFit fit;
  fit.weights = {0.4, 0.6};
  fit.rates = {10.0, 10.5};
  const auto out = select_components(fit, 0.01, 0.10);
  ASSERT_EQ(out.components(), 1u);
  EXPECT_NEAR(out.rates[0], 0.4 * 10.0 + 0.6 * 10.5, 1e-12);
  EXPECT_NEAR(out.rates[0], 10.3, 1e-12);
  EXPECT_DOUBLE_EQ(out.weights[0], 1.0);
}

TEST(SelectComponents, MinimalMixtureIsFixedPoint) {
  MixtureFit fit;
  fit.weights = {0.3, 0.7};
  fit.rates = {2.0, 20.0};
  const auto out = select_components(fit);
  EXPECT_EQ(out.rates, fit.rates);
  EXPECT_EQ(out.weights, fit.weights);
}

TEST(LabelRule, Extremes) {
  const LabelRule rule(std::vector<double>{2.0, 20.0});
  EXPECT_EQ(rule.label(0), 0);
  EXPECT_EQ(rule.label(1'000'000), 1);
  EXPECT_EQ(rule.levels(), 2u);
}

TEST(LabelRule, SingleSwitchMatchesPmfComparison) {
  const LabelRule rule(std::vector<double>{2.0, 20.0});
  int switches = 0;
  for (Count y = 0; y <= 100; ++y) {
    const int expected = oracle::log_poisson(y, 20.0) > oracle::log_poisson(y, 2.0) ? 1 : 0;
    EXPECT_EQ(rule.label(y), expected) << y;
    if (y > 0 && rule.label(y) != rule.label(y - 1)) ++switches;
  }
  EXPECT_EQ(switches, 1);
}

TEST(LabelRule, MonotoneForSortedRates) {
  const LabelRule rule(std::vector<double>{0.5, 3.0, 9.0, 40.0, 41.0, 300.0});
  for (Count y = 1; y < 2000; ++y) EXPECT_GE(rule.label(y), rule.label(y - 1));
}

TEST(LabelRule, TiesGoToLowestIndex) {
  // PD(y; 1) = PD(y; 1) for every y.
  const LabelRule rule(std::vector<double>{1.0, 1.0});
  for (Count y = 0; y < 10; ++y) EXPECT_EQ(rule.label(y), 0);
}
