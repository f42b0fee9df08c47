#pragma once

// Gibbs sampler for the conditional tensor factorisation with fixed cluster
// counts K: allocations z, cell-to-atom labels Z*, truncated stick-breaking
// weights, atom rates and the per-predictor soft-clustering kernels pi^(j).
//
// Cells are stored in a layout order chosen at construction; draws always
// report Z* in canonical order (predictor 0 varies fastest).

#include "btf/core.hpp"
#include "btf/design.hpp"
#include "btf/lag_selection.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace btf {

/// Snapshot of one retained iteration: everything needed to evaluate the
/// one-step-ahead transition pmf.
struct PosteriorDraw {
  std::vector<int> k;                   // clusters per predictor
  std::vector<int> levels;              // label levels per predictor
  std::vector<double> pistar;           // L stick weights
  std::vector<double> lambdastar;       // L atom rates
  std::vector<std::uint32_t> zstar;     // atom of each cell, canonical order
  std::vector<std::vector<double>> pi;  // pi[p][level * k[p] + h]

  double kernel(std::size_t p, int level, int h) const {
    return pi[p][static_cast<std::size_t>(level * k[p] + h)];
  }

  bool operator==(const PosteriorDraw&) const = default;
};

struct SamplerState {
  std::vector<int> k;
  std::vector<int> levels;
  CellIndex cells;                       // layout used for cell_n / cell_sum / zstar
  std::vector<int> z;                    // n x P allocations
  std::vector<std::uint32_t> zstar;      // per layout cell
  std::vector<double> V;
  std::vector<double> pistar;
  std::vector<double> lambdastar;
  std::vector<std::vector<double>> pi;   // pi[p][level * k[p] + h]
  std::vector<std::uint64_t> cell_of;    // layout cell of each observation
  std::vector<std::int64_t> cell_n;      // observations per cell
  std::vector<std::int64_t> cell_sum;    // sum of responses per cell
  std::uint64_t sweeps = 0;
};

struct ChainOptions {
  std::size_t burnin = 2000;
  std::size_t iters = 5000;
  std::size_t thin = 1;
  /// Full recomputation period of the incremental cell statistics.
  std::size_t recompute_every = 100;

  bool operator==(const ChainOptions&) const = default;
};

class BtfGibbs {
public:
  /// `hyper` must be resolved (shape a set). `significance` optionally lists
  /// predictors from fastest to slowest in the internal cell layout.
  BtfGibbs(const LaggedDesign& design, const Partition& partition, const Hyperparams& hyper,
           Rng& rng, std::vector<int> significance = {});

  void step_z(Rng& rng);
  void step_zstar(Rng& rng);
  void step_sticks(Rng& rng);
  void step_rates(Rng& rng);
  void step_pi(Rng& rng);

  /// z -> Z* -> V -> lambda* -> pi, then periodic statistics refresh.
  void sweep(Rng& rng, std::size_t recompute_every = 100);

  /// Rebuilds cell_of / cell_n / cell_sum from z.
  void recompute_statistics();
  /// Recomputes pi* from V.
  void refresh_pistar();

  PosteriorDraw snapshot() const;

  SamplerState& state() { return state_; }
  const SamplerState& state() const { return state_; }
  const LaggedDesign& design() const { return *design_; }
  const Hyperparams& hyper() const { return hyper_; }

  /// Canonical index of a layout cell.
  std::uint64_t canonical_cell(std::uint64_t layout_cell) const;

private:
  const LaggedDesign* design_;
  Hyperparams hyper_;
  SamplerState state_;
  CellIndex canonical_index_;
  std::vector<std::uint64_t> layout_to_canonical_; // empty when layouts coincide
  std::vector<double> scratch_;
};

std::vector<PosteriorDraw> run_chain(const LaggedDesign& design, const Partition& partition,
                                     const Hyperparams& hyper, const ChainOptions& options,
                                     Rng& rng, std::vector<int> significance = {});

/// Probability of each atom under context D: sum over cells labelled l of
/// prod_j pi^(j)_{h_j}(d_j).
std::vector<double> atom_weights(const PosteriorDraw& draw, std::span<const int> context);

/// p(y | D) = sum_H PD(y; lambda_H) prod_j pi^(j)_{h_j}(d_j).
double transition_pmf(const PosteriorDraw& draw, std::span<const int> context, Count y);

/// E(y | D) = sum_H lambda_H prod_j pi^(j)_{h_j}(d_j).
double predictive_mean(const PosteriorDraw& draw, std::span<const int> context);

/// Draw-averaged pmf over y = 0, 1, ... until the remaining mass is below
/// `tail`.
std::vector<double> averaged_pmf(std::span<const PosteriorDraw> draws,
                                 std::span<const int> context, double tail = 1e-12);

/// Highest-density set of a pmf at `level`, reported as (min, max) count.
std::pair<Count, Count> highest_density_bounds(std::span<const double> pmf, double level);

std::pair<Count, Count> predictive_interval(std::span<const PosteriorDraw> draws,
                                            std::span<const int> context, double level = 0.95);

/// Structural checks on a draw: stick weights sum to one, every pi row is a
/// simplex, rates positive, labels in range. Returns a list of violations.
std::vector<std::string> check_draw(const PosteriorDraw& draw, double tol = 1e-8);

/// Full-state checks, including pi* = V_l prod_{s<l} (1 - V_s) and the
/// incremental cell statistics.
std::vector<std::string> check_state(const BtfGibbs& sampler, double tol = 1e-10);

} // namespace btf
