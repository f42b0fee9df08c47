#include "btf/btf_gibbs.hpp"
#include "btf/datagen.hpp"
#include "btf/design.hpp"
#include "btf/lag_selection.hpp"
#include "btf/poisson_mixture.hpp"

#include <benchmark/benchmark.h>

using namespace btf;

namespace {

// Training design for table2-F with a coarse three-level labelling.
struct Fixture {
  CountSeries data;
  DataSplit split;
  std::vector<LabelRule> rules;
  LaggedDesign design;

  Fixture() {
    Rng rng(1);
    auto spec = scenario_preset("table2-F");
    spec.length = 2500;
    data = generate(spec, rng);
    split = make_split(2500, 1000, 1000, 11);
    rules = {LabelRule(std::vector<double>{20.0, 60.0, 100.0})};
    design = training_design(data, rules, 0, split);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Partition important_lags(const LaggedDesign& d, std::initializer_list<int> lags) {
  auto part = Partition::trivial(d.level_counts());
  for (int lag : lags) {
    const auto p = static_cast<std::size_t>(lag - 1);
    part.k[p] = 2;
    part.assign[p] = {0, 1, 1};
  }
  return part;
}

void BM_GibbsSweep(benchmark::State& state) {
  const auto& f = fixture();
  Hyperparams h;
  h.truncation = static_cast<std::size_t>(state.range(0));
  h = h.resolved(f.design.responses());
  Rng rng(2);
  BtfGibbs sampler(f.design, important_lags(f.design, {7, 8, 9}), h, rng);
  for (auto _ : state) sampler.sweep(rng);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.design.size()));
}
BENCHMARK(BM_GibbsSweep)->Arg(20)->Arg(100);

void BM_MarginalLikelihood(benchmark::State& state) {
  const auto& f = fixture();
  MarginalLikelihood eval(f.design, 60.0, 1.0);
  const auto part = important_lags(f.design, {7, 8, 9});
  for (auto _ : state) benchmark::DoNotOptimize(eval(part));
}
BENCHMARK(BM_MarginalLikelihood);

void BM_LagSelectionIteration(benchmark::State& state) {
  const auto& f = fixture();
  Hyperparams h;
  h = h.resolved(f.design.responses());
  LagSelectionOptions opt;
  opt.burnin = 0;
  opt.iters = 10;
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_K(f.design, h, opt, rng));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_LagSelectionIteration);

void BM_TransitionPmf(benchmark::State& state) {
  const auto& f = fixture();
  Hyperparams h;
  h = h.resolved(f.design.responses());
  Rng rng(4);
  BtfGibbs sampler(f.design, important_lags(f.design, {7, 8, 9}), h, rng);
  for (int i = 0; i < 50; ++i) sampler.sweep(rng);
  const auto draw = sampler.snapshot();
  const auto ctx = f.design.context(0);
  Count y = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_pmf(draw, ctx, y));
    y = (y + 1) % 120;
  }
}
BENCHMARK(BM_TransitionPmf);

} // namespace

BENCHMARK_MAIN();
