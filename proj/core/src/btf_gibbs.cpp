#include "btf/btf_gibbs.hpp"

#include "btf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace btf {

namespace {

// Fork ids used when keying per-cell streams off a per-sweep base stream.
constexpr std::uint64_t kZstarInitStream = 0x5A5A0001;

} // namespace

BtfGibbs::BtfGibbs(const LaggedDesign& design, const Partition& partition,
                   const Hyperparams& hyper, Rng& rng, std::vector<int> significance)
    : design_(&design), hyper_(hyper) {
  hyper_.validate();
  (void)hyper_.shape();
  partition.validate();
  if (partition.predictors() != design.predictors()) {
    throw std::invalid_argument("partition does not match design predictors");
  }
  const std::size_t P = design.predictors();
  const std::size_t n = design.size();
  const std::size_t L = hyper_.truncation;
  auto& s = state_;
  s.k = partition.k;
  s.levels = design.level_counts();
  canonical_index_ = CellIndex(s.k, hyper_.cell_cap);
  if (significance.empty()) {
    s.cells = canonical_index_;
  } else {
    s.cells = CellIndex(s.k, significance, hyper_.cell_cap);
    layout_to_canonical_.resize(s.cells.size());
    std::vector<int> tuple(P);
    for (std::uint64_t c = 0; c < s.cells.size(); ++c) {
      s.cells.decode(c, tuple);
      layout_to_canonical_[c] = canonical_index_.encode(tuple);
    }
  }

  s.z.resize(n * P);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < P; ++p) {
      s.z[i * P + p] = partition.assign[p][static_cast<std::size_t>(design.label(i, p))];
    }
  }

  const double a = hyper_.shape();
  s.lambdastar.resize(L);
  for (auto& lambda : s.lambdastar) {
    lambda = sample_gamma(a, hyper_.b, rng);
  }
  s.V.resize(L);
  for (std::size_t l = 0; l + 1 < L; ++l) {
    s.V[l] = sample_beta(1.0, hyper_.alpha0, rng);
  }
  s.V[L - 1] = 1.0;
  refresh_pistar();

  s.zstar.resize(s.cells.size());
  const Rng base = rng.split().fork(kZstarInitStream);
  for (std::uint64_t c = 0; c < s.cells.size(); ++c) {
    Rng cell_rng = base.fork(canonical_cell(c));
    s.zstar[c] = static_cast<std::uint32_t>(sample_discrete(s.pistar, cell_rng));
  }

  s.pi.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    const auto kp = static_cast<std::size_t>(s.k[p]);
    s.pi[p].assign(static_cast<std::size_t>(s.levels[p]) * kp, 1.0);
    if (kp == 1) {
      continue;
    }
    const std::vector<double> prior(kp, hyper_.gamma);
    for (int level = 0; level < s.levels[p]; ++level) {
      sample_dirichlet(prior, rng,
                       std::span<double>(s.pi[p]).subspan(static_cast<std::size_t>(level) * kp, kp));
    }
  }
  recompute_statistics();
}

std::uint64_t BtfGibbs::canonical_cell(std::uint64_t layout_cell) const {
  return layout_to_canonical_.empty() ? layout_cell : layout_to_canonical_[layout_cell];
}

void BtfGibbs::refresh_pistar() {
  auto& s = state_;
  s.pistar.resize(s.V.size());
  double remaining = 1.0;
  for (std::size_t l = 0; l < s.V.size(); ++l) {
    s.pistar[l] = s.V[l] * remaining;
    remaining *= 1.0 - s.V[l];
  }
}

void BtfGibbs::recompute_statistics() {
  auto& s = state_;
  const std::size_t P = design_->predictors();
  const std::size_t n = design_->size();
  s.cell_of.assign(n, 0);
  s.cell_n.assign(s.cells.size(), 0);
  s.cell_sum.assign(s.cells.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cell = s.cells.encode(std::span<const int>(s.z.data() + i * P, P));
    s.cell_of[i] = cell;
    s.cell_n[cell] += 1;
    s.cell_sum[cell] += design_->response(i);
  }
}

void BtfGibbs::step_z(Rng& rng) {
  auto& s = state_;
  const std::size_t P = design_->predictors();
  const std::size_t n = design_->size();
  std::vector<double> log_rate(s.lambdastar.size());
  for (std::size_t l = 0; l < log_rate.size(); ++l) {
    log_rate[l] = std::log(s.lambdastar[l]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Count y = design_->response(i);
    const double yd = static_cast<double>(y);
    for (std::size_t p = 0; p < P; ++p) {
      const int kp = s.k[p];
      if (kp == 1) {
        continue;
      }
      const int current = s.z[i * P + p];
      const std::uint64_t stride = s.cells.stride(p);
      const std::uint64_t base = s.cell_of[i] - static_cast<std::uint64_t>(current) * stride;
      const int level = design_->label(i, p);
      scratch_.resize(static_cast<std::size_t>(kp));
      for (int h = 0; h < kp; ++h) {
        const auto atom = s.zstar[base + static_cast<std::uint64_t>(h) * stride];
        scratch_[static_cast<std::size_t>(h)] =
            std::log(s.pi[p][static_cast<std::size_t>(level * kp + h)]) +
            yd * log_rate[atom] - s.lambdastar[atom];
      }
      const int next = static_cast<int>(sample_categorical(scratch_, rng));
      if (next != current) {
        const std::uint64_t from = s.cell_of[i];
        const std::uint64_t to = base + static_cast<std::uint64_t>(next) * stride;
        s.cell_n[from] -= 1;
        s.cell_sum[from] -= y;
        s.cell_n[to] += 1;
        s.cell_sum[to] += y;
        s.cell_of[i] = to;
        s.z[i * P + p] = next;
      }
    }
  }
}

void BtfGibbs::step_zstar(Rng& rng) {
  auto& s = state_;
  const std::size_t L = s.lambdastar.size();
  std::vector<double> log_pistar(L), log_rate(L);
  for (std::size_t l = 0; l < L; ++l) {
    log_pistar[l] = std::log(s.pistar[l]);
    log_rate[l] = std::log(s.lambdastar[l]);
  }
  scratch_.resize(L);
  const Rng base = rng.split();
  for (std::uint64_t c = 0; c < s.cells.size(); ++c) {
    Rng cell_rng = base.fork(canonical_cell(c));
    const auto n = s.cell_n[c];
    if (n == 0) {
      s.zstar[c] = static_cast<std::uint32_t>(sample_discrete(s.pistar, cell_rng));
      continue;
    }
    const double sum = static_cast<double>(s.cell_sum[c]);
    const double nd = static_cast<double>(n);
    for (std::size_t l = 0; l < L; ++l) {
      scratch_[l] = log_pistar[l] + sum * log_rate[l] - nd * s.lambdastar[l];
    }
    s.zstar[c] = static_cast<std::uint32_t>(sample_categorical(scratch_, cell_rng));
  }
}

void BtfGibbs::step_sticks(Rng& rng) {
  auto& s = state_;
  const std::size_t L = s.V.size();
  std::vector<double> occupancy(L, 0.0);
  for (auto atom : s.zstar) {
    occupancy[atom] += 1.0;
  }
  double above = std::accumulate(occupancy.begin(), occupancy.end(), 0.0);
  for (std::size_t l = 0; l + 1 < L; ++l) {
    above -= occupancy[l];
    s.V[l] = sample_beta(1.0 + occupancy[l], hyper_.alpha0 + above, rng);
  }
  s.V[L - 1] = 1.0;
  refresh_pistar();
}

void BtfGibbs::step_rates(Rng& rng) {
  auto& s = state_;
  const std::size_t L = s.lambdastar.size();
  std::vector<std::int64_t> total_sum(L, 0), total_n(L, 0);
  for (std::uint64_t c = 0; c < s.cells.size(); ++c) {
    total_sum[s.zstar[c]] += s.cell_sum[c];
    total_n[s.zstar[c]] += s.cell_n[c];
  }
  const double a = hyper_.shape();
  for (std::size_t l = 0; l < L; ++l) {
    const double rate = sample_gamma(a + static_cast<double>(total_sum[l]),
                                     hyper_.b + static_cast<double>(total_n[l]), rng);
    // Guard against an underflowed draw making log(rate) = -inf.
    s.lambdastar[l] = std::max(rate, 1e-300);
  }
}

void BtfGibbs::step_pi(Rng& rng) {
  auto& s = state_;
  const std::size_t P = design_->predictors();
  const std::size_t n = design_->size();
  for (std::size_t p = 0; p < P; ++p) {
    const auto kp = static_cast<std::size_t>(s.k[p]);
    if (kp == 1) {
      continue;
    }
    std::vector<double> conc(static_cast<std::size_t>(s.levels[p]) * kp, hyper_.gamma);
    for (std::size_t i = 0; i < n; ++i) {
      conc[static_cast<std::size_t>(design_->label(i, p)) * kp +
           static_cast<std::size_t>(s.z[i * P + p])] += 1.0;
    }
    for (std::size_t level = 0; level < static_cast<std::size_t>(s.levels[p]); ++level) {
      sample_dirichlet(std::span<const double>(conc).subspan(level * kp, kp), rng,
                       std::span<double>(s.pi[p]).subspan(level * kp, kp));
      // Dirichlet components may underflow to exactly zero for tiny
      // concentrations; keep every allocation reachable.
      for (std::size_t h = 0; h < kp; ++h) {
        s.pi[p][level * kp + h] = std::max(s.pi[p][level * kp + h], 1e-300);
      }
    }
  }
}

void BtfGibbs::sweep(Rng& rng, std::size_t recompute_every) {
  step_z(rng);
  step_zstar(rng);
  step_sticks(rng);
  step_rates(rng);
  step_pi(rng);
  ++state_.sweeps;
  if (recompute_every > 0 && state_.sweeps % recompute_every == 0) {
    recompute_statistics();
  }
}

PosteriorDraw BtfGibbs::snapshot() const {
  const auto& s = state_;
  PosteriorDraw draw;
  draw.k = s.k;
  draw.levels = s.levels;
  draw.pistar = s.pistar;
  draw.lambdastar = s.lambdastar;
  draw.pi = s.pi;
  draw.zstar.resize(s.zstar.size());
  for (std::uint64_t c = 0; c < s.zstar.size(); ++c) {
    draw.zstar[canonical_cell(c)] = s.zstar[c];
  }
  return draw;
}

std::vector<PosteriorDraw> run_chain(const LaggedDesign& design, const Partition& partition,
                                     const Hyperparams& hyper, const ChainOptions& options,
                                     Rng& rng, std::vector<int> significance) {
  if (options.thin == 0) {
    throw std::invalid_argument("thinning interval must be at least 1");
  }
  BtfGibbs sampler(design, partition, hyper, rng, std::move(significance));
  std::vector<PosteriorDraw> draws;
  draws.reserve(options.iters / options.thin + 1);
  for (std::size_t s = 0; s < options.burnin + options.iters; ++s) {
    sampler.sweep(rng, options.recompute_every);
    if (s >= options.burnin && (s - options.burnin) % options.thin == 0) {
      draws.push_back(sampler.snapshot());
    }
  }
  return draws;
}

std::vector<double> atom_weights(const PosteriorDraw& draw, std::span<const int> context) {
  if (context.size() != draw.k.size()) {
    throw std::invalid_argument("context length does not match predictors");
  }
  // Expand the product of kernels over cells in canonical order.
  std::vector<double> cell_weight{1.0};
  std::vector<double> next;
  for (std::size_t p = 0; p < draw.k.size(); ++p) {
    const int kp = draw.k[p];
    if (context[p] < 0 || context[p] >= draw.levels[p]) {
      throw std::out_of_range("context label outside predictor levels");
    }
    if (kp == 1) {
      continue;
    }
    next.resize(cell_weight.size() * static_cast<std::size_t>(kp));
    for (int h = 0; h < kp; ++h) {
      const double w = draw.kernel(p, context[p], h);
      for (std::size_t c = 0; c < cell_weight.size(); ++c) {
        next[static_cast<std::size_t>(h) * cell_weight.size() + c] = cell_weight[c] * w;
      }
    }
    cell_weight.swap(next);
  }
  std::vector<double> weights(draw.lambdastar.size(), 0.0);
  for (std::size_t c = 0; c < cell_weight.size(); ++c) {
    weights[draw.zstar[c]] += cell_weight[c];
  }
  return weights;
}

double transition_pmf(const PosteriorDraw& draw, std::span<const int> context, Count y) {
  const auto weights = atom_weights(draw, context);
  double total = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l] > 0.0) {
      total += weights[l] * std::exp(poisson_log_pmf(y, draw.lambdastar[l]));
    }
  }
  return total;
}

double predictive_mean(const PosteriorDraw& draw, std::span<const int> context) {
  const auto weights = atom_weights(draw, context);
  double total = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    total += weights[l] * draw.lambdastar[l];
  }
  return total;
}

std::vector<double> averaged_pmf(std::span<const PosteriorDraw> draws,
                                 std::span<const int> context, double tail) {
  if (draws.empty()) {
    throw std::invalid_argument("no posterior draws");
  }
  // Collapse every draw to a weighted set of Poisson rates.
  std::vector<std::pair<double, double>> components;
  const double scale = 1.0 / static_cast<double>(draws.size());
  for (const auto& draw : draws) {
    const auto weights = atom_weights(draw, context);
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (weights[l] > 0.0) {
        components.emplace_back(weights[l] * scale, draw.lambdastar[l]);
      }
    }
  }
  std::vector<double> pmf;
  double mass = 0.0;
  double max_rate = 0.0;
  for (const auto& [w, rate] : components) {
    max_rate = std::max(max_rate, rate);
  }
  const auto hard_limit = static_cast<Count>(max_rate + 50.0 * std::sqrt(max_rate + 1.0) + 100.0);
  for (Count y = 0; y <= hard_limit; ++y) {
    double p = 0.0;
    for (const auto& [w, rate] : components) {
      p += w * std::exp(poisson_log_pmf(y, rate));
    }
    pmf.push_back(p);
    mass += p;
    if (1.0 - mass < tail && static_cast<double>(y) > max_rate) {
      break;
    }
  }
  return pmf;
}

std::pair<Count, Count> highest_density_bounds(std::span<const double> pmf, double level) {
  if (pmf.empty()) {
    throw std::invalid_argument("empty pmf");
  }
  std::vector<std::size_t> order(pmf.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pmf[x] > pmf[y]; });
  double mass = 0.0;
  std::size_t lo = order.front(), hi = order.front();
  for (std::size_t idx : order) {
    lo = std::min(lo, idx);
    hi = std::max(hi, idx);
    mass += pmf[idx];
    if (mass >= level) {
      break;
    }
  }
  return {static_cast<Count>(lo), static_cast<Count>(hi)};
}

std::pair<Count, Count> predictive_interval(std::span<const PosteriorDraw> draws,
                                            std::span<const int> context, double level) {
  return highest_density_bounds(averaged_pmf(draws, context), level);
}

std::vector<std::string> check_draw(const PosteriorDraw& draw, double tol) {
  std::vector<std::string> issues;
  const double stick_sum = std::accumulate(draw.pistar.begin(), draw.pistar.end(), 0.0);
  if (std::abs(stick_sum - 1.0) > tol) {
    issues.push_back("stick weights sum to " + std::to_string(stick_sum));
  }
  for (double w : draw.pistar) {
    if (!(w >= 0.0)) {
      issues.push_back("negative stick weight");
      break;
    }
  }
  for (double rate : draw.lambdastar) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      issues.push_back("non-positive atom rate");
      break;
    }
  }
  for (auto atom : draw.zstar) {
    if (atom >= draw.lambdastar.size()) {
      issues.push_back("cell label outside truncation");
      break;
    }
  }
  for (std::size_t p = 0; p < draw.k.size(); ++p) {
    for (int level = 0; level < draw.levels[p]; ++level) {
      double sum = 0.0;
      for (int h = 0; h < draw.k[p]; ++h) {
        const double w = draw.kernel(p, level, h);
        if (!(w >= 0.0)) {
          issues.push_back("negative kernel probability");
        }
        sum += w;
      }
      if (std::abs(sum - 1.0) > tol) {
        issues.push_back("kernel pi^(" + std::to_string(p) + ")(" + std::to_string(level) +
                         ") sums to " + std::to_string(sum));
      }
    }
  }
  return issues;
}

std::vector<std::string> check_state(const BtfGibbs& sampler, double tol) {
  std::vector<std::string> issues = check_draw(sampler.snapshot(), tol);
  const auto& s = sampler.state();
  double remaining = 1.0;
  for (std::size_t l = 0; l < s.V.size(); ++l) {
    if (std::abs(s.pistar[l] - s.V[l] * remaining) > tol) {
      issues.push_back("stick formula violated at atom " + std::to_string(l));
      break;
    }
    remaining *= 1.0 - s.V[l];
  }
  if (s.V.back() != 1.0) {
    issues.push_back("last stick fraction is not closed");
  }
  BtfGibbs copy = sampler;
  copy.recompute_statistics();
  if (copy.state().cell_n != s.cell_n || copy.state().cell_sum != s.cell_sum ||
      copy.state().cell_of != s.cell_of) {
    issues.push_back("incremental cell statistics drifted");
  }
  return issues;
}

} // namespace btf
