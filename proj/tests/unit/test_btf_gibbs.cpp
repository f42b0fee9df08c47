#include "btf/btf_gibbs.hpp"

#include "btf/distributions.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace btf;

namespace {

LaggedDesign random_design(Rng& rng, std::size_t n, std::vector<int> levels, double rate = 5.0) {
  std::vector<Predictor> preds;
  for (std::size_t p = 0; p < levels.size(); ++p) preds.push_back({0, static_cast<int>(p + 1), levels[p]});
  std::vector<Count> y(n);
  std::vector<int> labels(n * levels.size());
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = sample_poisson(rate, rng);
    for (std::size_t p = 0; p < levels.size(); ++p) {
      labels[i * levels.size() + p] = static_cast<int>(rng.next_u64() % levels[p]);
    }
  }
  return LaggedDesign(preds, y, labels);
}

Partition identity_partition(const std::vector<int>& levels) {
  Partition part;
  for (int c : levels) {
    std::vector<int> a(static_cast<std::size_t>(c));
    std::iota(a.begin(), a.end(), 0);
    part.assign.push_back(a);
    part.k.push_back(c);
  }
  return part;
}

Hyperparams small_hyper(std::size_t L = 10) {
  Hyperparams h;
  h.a = 2.0;
  h.truncation = L;
  return h;
}

} // namespace

TEST(BtfGibbs, AllTrivialGivesSingleCell) {
  Rng rng(1);
  const auto d = random_design(rng, 50, {3, 2});
  BtfGibbs g(d, Partition::trivial(d.level_counts()), small_hyper(), rng);
  EXPECT_EQ(g.state().cells.size(), 1u);
  EXPECT_EQ(g.state().cell_n[0], 50);
  EXPECT_TRUE(check_state(g).empty());
}

TEST(BtfGibbs, InitialisationIsDeterministicAndConsistent) {
  Rng gen(2);
  const auto d = random_design(gen, 80, {3, 2});
  Rng r1(9), r2(9);
  BtfGibbs a(d, identity_partition({3, 2}), small_hyper(), r1);
  BtfGibbs b(d, identity_partition({3, 2}), small_hyper(), r2);
  EXPECT_EQ(a.snapshot(), b.snapshot());
  EXPECT_TRUE(check_state(a).empty());
  EXPECT_TRUE(check_draw(a.snapshot()).empty());
}

TEST(BtfGibbs, ZstarWithSingleAtom) {
  Rng rng(3);
  const auto d = random_design(rng, 40, {2});
  BtfGibbs g(d, identity_partition({2}), small_hyper(1), rng);
  g.step_zstar(rng);
  for (auto z : g.state().zstar) EXPECT_EQ(z, 0u);
  EXPECT_DOUBLE_EQ(g.state().pistar[0], 1.0);
}

TEST(BtfGibbs, ZstarPrefersMatchingAtom) {
  const LaggedDesign d({{0, 1, 1}}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0});
  Rng rng(4);
  BtfGibbs g(d, Partition::trivial(d.level_counts()), small_hyper(2), rng);
  auto& s = g.state();
  s.lambdastar = {1.0, 100.0};
  s.V = {0.5, 1.0};
  g.refresh_pistar();
  for (int rep = 0; rep < 20; ++rep) {
    g.step_zstar(rng);
    EXPECT_EQ(s.zstar[0], 0u);
  }
}

TEST(BtfGibbs, EmptyCellsDrawFromStickWeights) {
  // One observation, four cells: three are always empty.
  const LaggedDesign d({{0, 1, 4}}, {3}, {0});
  Rng rng(5);
  BtfGibbs g(d, identity_partition({4}), small_hyper(3), rng);
  auto& s = g.state();
  s.V = {0.2, 0.5, 1.0};
  g.refresh_pistar();
  std::vector<double> counts(3, 0.0);
  for (int rep = 0; rep < 20000; ++rep) {
    g.step_zstar(rng);
    for (std::uint64_t c = 0; c < s.cells.size(); ++c) {
      if (s.cell_n[c] == 0) counts[s.zstar[c]] += 1.0;
    }
  }
  EXPECT_LT(oracle::chi_square(counts, s.pistar), oracle::chi_square_bound(2));
}

TEST(BtfGibbs, SticksFollowPriorWithoutOccupancy) {
  // A single cell means every stick beyond the occupied atom is a prior draw.
  const LaggedDesign d({{0, 1, 1}}, {2}, {0});
  Rng rng(6);
  auto h = small_hyper(4);
  h.alpha0 = 3.0;
  BtfGibbs g(d, Partition::trivial(d.level_counts()), h, rng);
  auto& s = g.state();
  double sum = 0.0, sum2 = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    s.zstar[0] = 3; // the last atom; V_0 .. V_2 see no occupancy
    g.step_sticks(rng);
    sum += s.V[0];
    sum2 += s.V[0] * s.V[0];
  }
  const double mean = sum / reps;
  // Beta(1, alpha0 + 1): the one occupied atom lies above atom 0.
  const double ea = 1.0, eb = 3.0 + 1.0;
  EXPECT_NEAR(mean, ea / (ea + eb), 5.0 * std::sqrt(sum2 / reps - mean * mean) / std::sqrt(reps));
  EXPECT_DOUBLE_EQ(s.V[3], 1.0);
  double total = std::accumulate(s.pistar.begin(), s.pistar.end(), 0.0);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(BtfGibbs, RatesAreConjugateGamma) {
  const LaggedDesign d({{0, 1, 1}}, {4, 6, 5}, {0, 0, 0});
  Rng rng(7);
  BtfGibbs g(d, Partition::trivial(d.level_counts()), small_hyper(2), rng);
  auto& s = g.state();
  double sum0 = 0.0, sum1 = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    s.zstar[0] = 0;
    g.step_rates(rng);
    sum0 += s.lambdastar[0];
    sum1 += s.lambdastar[1];
  }
  // Posterior Gamma(2 + 15, 1 + 3) for atom 0, prior Gamma(2, 1) for atom 1.
  EXPECT_NEAR(sum0 / reps, 17.0 / 4.0, 0.02);
  EXPECT_NEAR(sum1 / reps, 2.0, 0.04);
}

TEST(BtfGibbs, RateAggregationMatchesRecompute) {
  Rng rng(8);
  const auto d = random_design(rng, 200, {3, 2});
  BtfGibbs g(d, identity_partition({3, 2}), small_hyper(), rng);
  for (int r = 0; r < 30; ++r) {
    g.sweep(rng, 0);
    const auto n = g.state().cell_n;
    const auto s = g.state().cell_sum;
    g.recompute_statistics();
    ASSERT_EQ(n, g.state().cell_n);
    ASSERT_EQ(s, g.state().cell_sum);
    ASSERT_TRUE(check_state(g).empty());
  }
}

TEST(BtfGibbs, KernelPosteriorUsesAllocationCounts) {
  // Fix z so that every observation of level 0 sits in cluster 1.
  const LaggedDesign d({{0, 1, 2}}, {1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 1, 1});
  Rng rng(9);
  auto h = small_hyper(2);
  h.gamma = 0.5;
  BtfGibbs g(d, identity_partition({2}), h, rng);
  auto& s = g.state();
  s.z = {1, 1, 1, 1, 0, 1};
  g.recompute_statistics();
  double m00 = 0.0, m10 = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    g.step_pi(rng);
    m00 += s.pi[0][0];
    m10 += s.pi[0][2];
  }
  // Level 0: Dirichlet(0.5, 4.5); level 1: Dirichlet(1.5, 1.5).
  EXPECT_NEAR(m00 / reps, 0.5 / 5.0, 0.005);
  EXPECT_NEAR(m10 / reps, 0.5, 0.008);
}

TEST(BtfGibbs, AllocationConditionalIsTwoTermSoftmax) {
  const LaggedDesign d({{0, 1, 2}}, {3}, {0});
  Rng rng(10);
  BtfGibbs g(d, identity_partition({2}), small_hyper(2), rng);
  auto& s = g.state();
  s.lambdastar = {2.0, 6.0};
  s.zstar = {0, 1};
  s.pi[0] = {0.3, 0.7, 0.5, 0.5};
  const double w0 = 0.3 * std::exp(poisson_log_pmf(3, 2.0));
  const double w1 = 0.7 * std::exp(poisson_log_pmf(3, 6.0));
  const double expected = w1 / (w0 + w1);
  int ones = 0;
  const int reps = 50000;
  for (int r = 0; r < reps; ++r) {
    g.step_z(rng);
    ones += s.z[0];
  }
  const double sd = std::sqrt(expected * (1 - expected) / reps);
  EXPECT_NEAR(static_cast<double>(ones) / reps, expected, 5 * sd);
}

TEST(BtfGibbs, ChainRecoversIidMean) {
  Rng gen(11);
  const auto d = random_design(gen, 600, {2}, 5.0);
  Hyperparams h;
  h.truncation = 20;
  h = h.resolved(d.responses());
  ChainOptions opt;
  opt.burnin = 300;
  opt.iters = 600;
  Rng rng(12);
  const auto draws = run_chain(d, identity_partition({2}), h, opt, rng);
  ASSERT_EQ(draws.size(), 600u);
  for (int level = 0; level < 2; ++level) {
    double mean = 0.0;
    const std::vector<int> ctx{level};
    for (const auto& dr : draws) mean += predictive_mean(dr, ctx) / draws.size();
    EXPECT_NEAR(mean, 5.0, 0.3);
  }
  for (const auto& dr : draws) ASSERT_TRUE(check_draw(dr).empty());
}

TEST(BtfGibbs, ChainIsDeterministic) {
  Rng gen(13);
  const auto d = random_design(gen, 150, {3, 2});
  ChainOptions opt;
  opt.burnin = 20;
  opt.iters = 30;
  opt.thin = 3;
  Rng r1(5), r2(5);
  const auto a = run_chain(d, identity_partition({3, 2}), small_hyper(), opt, r1);
  const auto b = run_chain(d, identity_partition({3, 2}), small_hyper(), opt, r2);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, b);
}

TEST(BtfGibbs, CellLayoutDoesNotChangeTheChain) {
  Rng gen(14);
  const auto d = random_design(gen, 150, {3, 2, 2});
  ChainOptions opt;
  opt.burnin = 10;
  opt.iters = 20;
  const auto part = identity_partition({3, 2, 2});
  Rng r1(6), r2(6);
  const auto a = run_chain(d, part, small_hyper(), opt, r1);
  const auto b = run_chain(d, part, small_hyper(), opt, r2, {2, 0, 1});
  EXPECT_EQ(a, b);
}

TEST(TransitionPmf, TwoAtomExample) {
  PosteriorDraw dr;
  dr.k = {2};
  dr.levels = {1};
  dr.pistar = {0.5, 0.5};
  dr.lambdastar = {1.0, 10.0};
  dr.zstar = {0, 1};
  dr.pi = {{0.3, 0.7}};
  const std::vector<int> ctx{0};
  EXPECT_NEAR(transition_pmf(dr, ctx, 0), 0.3 * std::exp(-1.0) + 0.7 * std::exp(-10.0), 1e-15);
  double total = 0.0, mean = 0.0;
  for (Count y = 0; y < 80; ++y) {
    const double p = transition_pmf(dr, ctx, y);
    total += p;
    mean += static_cast<double>(y) * p;
  }
  EXPECT_NEAR(total, 1.0, 1e-8);
  EXPECT_NEAR(mean, predictive_mean(dr, ctx), 1e-8);
  EXPECT_NEAR(predictive_mean(dr, ctx), 0.3 + 7.0, 1e-12);
}

TEST(TransitionPmf, IntervalCoversMean) {
  Rng gen(15);
  const auto d = random_design(gen, 200, {2, 2});
  ChainOptions opt;
  opt.burnin = 50;
  opt.iters = 100;
  Rng rng(16);
  const auto draws = run_chain(d, identity_partition({2, 2}), small_hyper(), opt, rng);
  const std::vector<int> ctx{1, 0};
  double mean = 0.0;
  for (const auto& dr : draws) mean += predictive_mean(dr, ctx) / draws.size();
  const auto [lo, hi] = predictive_interval(draws, ctx, 0.95);
  EXPECT_LE(static_cast<double>(lo), mean);
  EXPECT_GE(static_cast<double>(hi), mean);
  const auto pmf = averaged_pmf(draws, ctx);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-10);
}

TEST(TransitionPmf, HighestDensityBounds) {
  const std::vector<double> pmf{0.05, 0.5, 0.3, 0.1, 0.05};
  EXPECT_EQ(highest_density_bounds(pmf, 0.75), (std::pair<Count, Count>{1, 2}));
  EXPECT_EQ(highest_density_bounds(pmf, 0.85), (std::pair<Count, Count>{1, 3}));
}

TEST(CheckDraw, FlagsViolations) {
  PosteriorDraw dr;
  dr.k = {2};
  dr.levels = {1};
  dr.pistar = {0.6, 0.6};
  dr.lambdastar = {1.0, -1.0};
  dr.zstar = {0, 3};
  dr.pi = {{0.3, 0.3}};
  EXPECT_GE(check_draw(dr).size(), 4u);
}
