#include "btf/par_baseline.hpp"

#include "btf/datagen.hpp"
#include "btf/distributions.hpp"
#include "nelder_mead.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace btf;

namespace {

CountSeries iid_series(double rate, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Count> y(n);
  for (auto& v : y) v = sample_poisson(rate, rng);
  return CountSeries::univariate(y);
}

CountSeries par_series(std::map<int, double> beta, std::size_t n, std::uint64_t seed) {
  ScenarioSpec s;
  s.name = "test";
  s.design = DesignKind::Par;
  s.length = n;
  s.beta0 = 1.0;
  s.beta = std::move(beta);
  Rng rng(seed);
  return generate(s, rng);
}

} // namespace

TEST(ParDesign, ColumnsAndWindow) {
  const auto data = CountSeries({{0, 1, 3, 7}, {2, 5, 4, 1}}, {"a", "b"});
  const auto st = par_structure(data, 0, 2, true);
  EXPECT_EQ(st.parameters(), 4u);
  EXPECT_EQ(st.coefficient_names(data.names()),
            (std::vector<std::string>{"beta_0", "beta_1", "beta_2", "zeta_b"}));
  const auto d = build_par_design(data, st, 2, 4);
  ASSERT_EQ(d.size(), 2u);
  const auto r = d.row(1);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], std::log(4.0));
  EXPECT_DOUBLE_EQ(r[2], std::log(2.0));
  EXPECT_DOUBLE_EQ(r[3], 4.0);
  EXPECT_THROW(build_par_design(data, st, 1, 4), std::out_of_range);
}

TEST(ParMle, IidSeriesGivesInterceptOnly) {
  const auto data = iid_series(std::exp(1.0), 20000, 1);
  const auto fit = fit_mle(data.series(0), 1);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.coef[0], 1.0, 0.05);
  EXPECT_NEAR(fit.coef[1], 0.0, 0.03);
}

TEST(ParMle, RecoversLagOneCoefficients) {
  const auto data = par_series({{1, 0.5}}, 4000, 2);
  const auto st = par_structure(data, 0, 1, false);
  const auto d = build_par_design(data, st, 1, data.length());
  const auto fit = fit_mle(d);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.coef[0], 1.0, 0.1);
  EXPECT_NEAR(fit.coef[1], 0.5, 0.05);
  const std::vector<double> truth{1.0, 0.5};
  EXPECT_GE(fit.log_likelihood, par_log_likelihood(d, truth));
}

TEST(ParMle, MatchesNelderMead) {
  const auto data = par_series({{1, -0.5}, {7, 0.5}}, 1500, 3);
  const auto st = par_structure(data, 0, 7, false);
  const auto d = build_par_design(data, st, 7, data.length());
  const auto fit = fit_mle(d);
  const auto nm = oracle::nelder_mead_mle(d, std::vector<double>(st.parameters(), 0.0));
  for (std::size_t i = 0; i < nm.size(); ++i) EXPECT_NEAR(fit.coef[i], nm[i], 1e-5);
  EXPECT_GE(fit.log_likelihood, par_log_likelihood(d, nm) - 1e-9);
}

TEST(ParMle, FlagsDivergence) {
  // Lagged counts perfectly separate zero from nonzero responses.
  const auto data = CountSeries::univariate({0, 0, 5, 0, 6, 0, 4, 0, 7, 0, 5, 0, 6, 0});
  const auto fit = fit_mle(data.series(0), 1);
  EXPECT_TRUE(fit.diverged);
}

TEST(ParOrder, BicPrefersOrderOneOnWhiteNoise) {
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = iid_series(3.0, 1000, 100 + seed);
    ones += select_order(data, 0, false, 0, 1000, 4, Criterion::BIC).order == 1;
  }
  EXPECT_GE(ones, 8);
}

TEST(ParOrder, FindsLagSeven) {
  const auto data = par_series({{7, 0.5}}, 3000, 4);
  const auto aic = select_order(data, 0, false, 0, 3000, 9, Criterion::AIC);
  const auto bic = select_order(data, 0, false, 0, 3000, 9, Criterion::BIC);
  EXPECT_GE(aic.order, 7u);
  EXPECT_GE(bic.order, 7u);
  EXPECT_EQ(bic.scores.size(), 9u);
  EXPECT_EQ(bic.window_begin, 9u);
  EXPECT_EQ(select_order(data, 0, false, 0, 3000, 1, Criterion::AIC).order, 1u);
}

TEST(ParOrder, ScoresUseTheCommonWindow) {
  const auto data = iid_series(4.0, 300, 5);
  const auto sel = select_order(data, 0, false, 10, 300, 5, Criterion::AIC);
  EXPECT_EQ(sel.window_begin, 15u);
  for (std::size_t q = 1; q <= 5; ++q) {
    const auto d = build_par_design(data, par_structure(data, 0, q, false), 15, 300);
    EXPECT_EQ(d.size(), 285u);
    EXPECT_NEAR(sel.scores[q - 1], 2.0 * (q + 1) - 2.0 * fit_mle(d).log_likelihood, 1e-9);
  }
}

TEST(ParChain, PosteriorCentresOnMle) {
  const auto data = par_series({{1, 0.5}}, 2000, 6);
  const auto d = build_par_design(data, par_structure(data, 0, 1, false), 1, data.length());
  const auto mle = fit_mle(d);
  ParChainOptions opt;
  opt.burnin = 2000;
  opt.iters = 8000;
  Rng rng(7);
  const auto chain = mh_chain(d, opt, rng);
  EXPECT_TRUE(chain.warnings.empty());
  EXPECT_GT(chain.acceptance_rate, 0.1);
  EXPECT_LT(chain.acceptance_rate, 0.5);
  const auto mean = chain.posterior_mean();
  const auto sd = chain.posterior_sd();
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(mean[i], mle.coef[i], 0.5 * sd[i]);
    EXPECT_GT(sd[i], 0.0);
  }
}

TEST(ParChain, LogPosteriorAddsNormalPrior) {
  const auto data = iid_series(2.0, 50, 8);
  const auto d = build_par_design(data, par_structure(data, 0, 1, false), 1, 50);
  const std::vector<double> coef{0.3, 0.2};
  ParChainOptions opt;
  EXPECT_NEAR(log_posterior(d, coef, opt),
              par_log_likelihood(d, coef) - 0.5 * 1e-6 * 0.09 - 0.5 * 1e-4 * 0.04, 1e-12);
}

TEST(ParChain, IntervalsCoverTruth) {
  int covered = 0;
  ParChainOptions opt;
  opt.burnin = 1000;
  opt.iters = 3000;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto data = par_series({{1, 0.4}}, 500, 200 + r);
    const auto d = build_par_design(data, par_structure(data, 0, 1, false), 1, 500);
    Rng rng(300 + r);
    auto chain = mh_chain(d, opt, rng);
    std::vector<double> b1;
    for (const auto& draw : chain.draws) b1.push_back(draw[1]);
    std::sort(b1.begin(), b1.end());
    const double lo = b1[b1.size() / 4], hi = b1[3 * b1.size() / 4];
    covered += lo <= 0.4 && 0.4 <= hi;
  }
  // Central 50% intervals.
  EXPECT_GE(covered, 6);
  EXPECT_LE(covered, 14);
}

TEST(ParChain, Deterministic) {
  const auto data = par_series({{1, 0.5}}, 300, 9);
  const auto d = build_par_design(data, par_structure(data, 0, 2, false), 2, 300);
  ParChainOptions opt;
  opt.burnin = 100;
  opt.iters = 200;
  Rng r1(3), r2(3);
  EXPECT_EQ(mh_chain(d, opt, r1).draws, mh_chain(d, opt, r2).draws);
}

TEST(ParPmf, Examples) {
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> row{1.0, std::log(5.0)};
  EXPECT_NEAR(par_transition_pmf(zero, row, 0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(par_transition_pmf(zero, row, 2), 0.5 * std::exp(-1.0), 1e-15);
  // log lambda = 0.5 + 0.2 log 4 - 0.1 log 2
  const std::vector<double> coef{0.5, 0.2, -0.1};
  const std::vector<double> row2{1.0, std::log(4.0), std::log(2.0)};
  const double lambda = std::exp(0.5 + 0.2 * std::log(4.0) - 0.1 * std::log(2.0));
  EXPECT_NEAR(par_rate(coef, row2), lambda, 1e-14);
  double total = 0.0;
  for (Count y = 0; y < 60; ++y) total += par_transition_pmf(coef, row2, y);
  EXPECT_NEAR(total, 1.0, 1e-12);
}
