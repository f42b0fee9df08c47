#include "btf/lag_selection.hpp"

#include "btf/distributions.hpp"
#include "btf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace btf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

// ln(2^m - 1) for m >= 1.
double log_pow2_minus1(int m) {
  return m * std::numbers::ln2 + std::log1p(-std::ldexp(1.0, -m));
}

double log_choose2(int k) {
  return std::log(0.5 * k * (k - 1));
}

std::vector<int> radices_of(const Partition& partition) {
  return partition.k;
}

bool within_cap(std::span<const int> radices, std::uint64_t cap) {
  std::uint64_t product = 1;
  for (int k : radices) {
    product *= static_cast<std::uint64_t>(k);
    if (product > cap) {
      return false;
    }
  }
  return true;
}

} // namespace

Partition Partition::trivial(std::span<const int> levels) {
  Partition out;
  for (int c : levels) {
    if (c < 1) {
      throw std::invalid_argument("each predictor needs at least one label level");
    }
    out.assign.emplace_back(static_cast<std::size_t>(c), 0);
    out.k.push_back(1);
  }
  return out;
}

std::vector<int> Partition::cluster_sizes(std::size_t p) const {
  std::vector<int> sizes(static_cast<std::size_t>(k[p]), 0);
  for (int r : assign[p]) {
    ++sizes[static_cast<std::size_t>(r)];
  }
  return sizes;
}

int Partition::splittable_clusters(std::size_t p) const {
  const auto sizes = cluster_sizes(p);
  return static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](int s) { return s >= 2; }));
}

Partition Partition::canonical() const {
  Partition out = *this;
  for (std::size_t p = 0; p < assign.size(); ++p) {
    std::vector<int> relabel(static_cast<std::size_t>(k[p]), -1);
    int next = 0;
    for (auto& r : out.assign[p]) {
      if (relabel[static_cast<std::size_t>(r)] < 0) {
        relabel[static_cast<std::size_t>(r)] = next++;
      }
      r = relabel[static_cast<std::size_t>(r)];
    }
  }
  return out;
}

void Partition::validate() const {
  if (assign.size() != k.size()) {
    throw std::logic_error("partition arity mismatch");
  }
  for (std::size_t p = 0; p < k.size(); ++p) {
    if (k[p] < 1 || k[p] > levels(p)) {
      throw std::logic_error("k out of range for predictor " + std::to_string(p));
    }
    for (int r : assign[p]) {
      if (r < 0 || r >= k[p]) {
        throw std::logic_error("cluster label out of range for predictor " + std::to_string(p));
      }
    }
    const auto sizes = cluster_sizes(p);
    if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
      throw std::logic_error("empty cluster for predictor " + std::to_string(p));
    }
  }
}

double log_cell_marginal(std::int64_t n, std::int64_t sum, double a, double b) {
  const double shape = a + static_cast<double>(sum);
  return a * std::log(b) - log_gamma(a) + log_gamma(shape) -
         shape * std::log(static_cast<double>(n) + b);
}

CellStatistics cell_statistics(const LaggedDesign& design, const Partition& partition,
                               std::uint64_t cell_cap) {
  if (partition.predictors() != design.predictors()) {
    throw std::invalid_argument("partition does not match design predictors");
  }
  CellStatistics stats{CellIndex(radices_of(partition), cell_cap), {}};
  std::map<std::uint64_t, CellCount> cells;
  for (std::size_t i = 0; i < design.size(); ++i) {
    std::uint64_t cell = 0;
    for (std::size_t p = 0; p < design.predictors(); ++p) {
      const int r = partition.assign[p][static_cast<std::size_t>(design.label(i, p))];
      cell += static_cast<std::uint64_t>(r) * stats.index.stride(p);
    }
    auto& entry = cells[cell];
    entry.cell = cell;
    entry.n += 1;
    entry.sum += design.response(i);
  }
  stats.cells.reserve(cells.size());
  for (const auto& [_, c] : cells) {
    stats.cells.push_back(c);
  }
  return stats;
}

double log_marginal(const LaggedDesign& design, const Partition& partition, double a, double b,
                    std::uint64_t cell_cap) {
  const auto stats = cell_statistics(design, partition, cell_cap);
  double total = 0.0;
  for (const auto& c : stats.cells) {
    total += log_cell_marginal(c.n, c.sum, a, b);
  }
  for (Count y : design.responses()) {
    total -= log_factorial(y);
  }
  return total;
}

MarginalLikelihood::MarginalLikelihood(const LaggedDesign& design, double a, double b,
                                       std::uint64_t cell_cap)
    : a_(a), b_(b), cap_(cell_cap) {
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < design.size(); ++i) {
    const auto ctx = design.context(i);
    std::vector<int> key(ctx.begin(), ctx.end());
    auto [it, inserted] = index.try_emplace(std::move(key), patterns_.size());
    if (inserted) {
      patterns_.push_back({it->first, 0, 0});
    }
    patterns_[it->second].n += 1;
    patterns_[it->second].sum += design.response(i);
    log_factorial_total_ += log_factorial(design.response(i));
  }
  cell_constant_ = a_ * std::log(b_) - log_gamma(a_);
}

double MarginalLikelihood::operator()(const Partition& partition) {
  const std::uint64_t cells = checked_cell_count(partition.k, cap_);
  std::vector<std::uint64_t> strides(partition.predictors());
  std::uint64_t stride = 1;
  std::vector<std::size_t> active;
  for (std::size_t p = 0; p < partition.predictors(); ++p) {
    strides[p] = stride;
    stride *= static_cast<std::uint64_t>(partition.k[p]);
    if (partition.k[p] > 1) {
      active.push_back(p);
    }
  }
  auto cell_of = [&](const Pattern& pat) {
    std::uint64_t cell = 0;
    for (std::size_t p : active) {
      cell += static_cast<std::uint64_t>(
                  partition.assign[p][static_cast<std::size_t>(pat.labels[p])]) *
              strides[p];
    }
    return cell;
  };
  auto term = [&](std::int64_t n, std::int64_t sum) {
    const double shape = a_ + static_cast<double>(sum);
    return cell_constant_ + log_gamma(shape) - shape * std::log(static_cast<double>(n) + b_);
  };

  double total = -log_factorial_total_;
  if (cells <= kDenseLimit) {
    if (dense_n_.size() < cells) {
      dense_n_.resize(cells, 0);
      dense_sum_.resize(cells, 0);
    }
    touched_.clear();
    for (const auto& pat : patterns_) {
      const auto cell = cell_of(pat);
      if (dense_n_[cell] == 0) {
        touched_.push_back(cell);
      }
      dense_n_[cell] += pat.n;
      dense_sum_[cell] += pat.sum;
    }
    // Accumulate in increasing cell order so the sum does not depend on
    // pattern order.
    std::sort(touched_.begin(), touched_.end());
    for (auto cell : touched_) {
      total += term(dense_n_[cell], dense_sum_[cell]);
      dense_n_[cell] = 0;
      dense_sum_[cell] = 0;
    }
    return total;
  }
  sparse_.clear();
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    sparse_.emplace_back(cell_of(patterns_[i]), i);
  }
  std::sort(sparse_.begin(), sparse_.end());
  for (std::size_t i = 0; i < sparse_.size();) {
    std::int64_t n = 0, sum = 0;
    std::size_t j = i;
    for (; j < sparse_.size() && sparse_[j].first == sparse_[i].first; ++j) {
      n += patterns_[sparse_[j].second].n;
      sum += patterns_[sparse_[j].second].sum;
    }
    total += term(n, sum);
    i = j;
  }
  return total;
}

double log_stirling2(int n, int k) {
  if (n < 0 || k < 0) {
    throw std::invalid_argument("Stirling numbers need nonnegative arguments");
  }
  if (k > n) {
    return kNegInf;
  }
  if (k == 0) {
    return n == 0 ? 0.0 : kNegInf;
  }
  // row[j] = ln S(i, j), built for i = 1..n.
  std::vector<double> row(static_cast<std::size_t>(k) + 1, kNegInf);
  row[0] = 0.0; // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      const double stay = row[static_cast<std::size_t>(j)] == kNegInf
                              ? kNegInf
                              : std::log(static_cast<double>(j)) + row[static_cast<std::size_t>(j)];
      const double grow = row[static_cast<std::size_t>(j) - 1];
      const double hi = std::max(stay, grow);
      row[static_cast<std::size_t>(j)] =
          hi == kNegInf ? kNegInf : hi + std::log(std::exp(stay - hi) + std::exp(grow - hi));
    }
    row[0] = kNegInf;
  }
  return row[static_cast<std::size_t>(k)];
}

double log_k_prior(int k, int levels, int lag, double phi) {
  if (k < 1 || k > levels) {
    return kNegInf;
  }
  return -phi * lag * k - log_stirling2(levels, k);
}

double split_move_probability(int k, int levels) {
  if (k >= levels) {
    return 0.0;
  }
  return k == 1 ? 1.0 : 0.5;
}

double merge_move_probability(int k, int levels) {
  if (k <= 1) {
    return 0.0;
  }
  return k == levels ? 1.0 : 0.5;
}

Partition apply_split(const Partition& partition, std::size_t p, int cluster,
                      std::span<const int> moved) {
  Partition out = partition;
  const int fresh = out.k[p];
  for (int level : moved) {
    if (out.assign[p][static_cast<std::size_t>(level)] != cluster) {
      throw std::invalid_argument("moved level does not belong to the split cluster");
    }
    out.assign[p][static_cast<std::size_t>(level)] = fresh;
  }
  out.k[p] += 1;
  const auto sizes = out.cluster_sizes(p);
  if (sizes[static_cast<std::size_t>(cluster)] == 0 || sizes[static_cast<std::size_t>(fresh)] == 0) {
    throw std::invalid_argument("split must leave both halves nonempty");
  }
  return out;
}

Partition apply_merge(const Partition& partition, std::size_t p, int r1, int r2) {
  if (r1 == r2) {
    throw std::invalid_argument("cannot merge a cluster with itself");
  }
  const int keep = std::min(r1, r2);
  const int drop = std::max(r1, r2);
  const int last = partition.k[p] - 1;
  Partition out = partition;
  for (auto& r : out.assign[p]) {
    if (r == drop) {
      r = keep;
    } else if (r == last) {
      r = drop;
    }
  }
  out.k[p] -= 1;
  return out;
}

double split_log_proposal_ratio(const Partition& partition, std::size_t p, int cluster) {
  const int k = partition.k[p];
  const int c = partition.levels(p);
  const int size = partition.cluster_sizes(p)[static_cast<std::size_t>(cluster)];
  const double forward = std::log(split_move_probability(k, c)) -
                         std::log(static_cast<double>(partition.splittable_clusters(p))) -
                         log_pow2_minus1(size - 1);
  const double reverse = std::log(merge_move_probability(k + 1, c)) - log_choose2(k + 1);
  return reverse - forward;
}

double merge_log_proposal_ratio(const Partition& partition, std::size_t p, int r1, int r2) {
  const int k = partition.k[p];
  const int c = partition.levels(p);
  const auto sizes = partition.cluster_sizes(p);
  const int merged = sizes[static_cast<std::size_t>(r1)] + sizes[static_cast<std::size_t>(r2)];
  const Partition after = apply_merge(partition, p, r1, r2);
  const double forward = std::log(merge_move_probability(k, c)) - log_choose2(k);
  const double reverse = std::log(split_move_probability(k - 1, c)) -
                         std::log(static_cast<double>(after.splittable_clusters(p))) -
                         log_pow2_minus1(merged - 1);
  return reverse - forward;
}

Proposal propose_split(const Partition& partition, std::size_t p, Rng& rng) {
  if (partition.k[p] >= partition.levels(p)) {
    throw std::invalid_argument("no splittable cluster");
  }
  const auto sizes = partition.cluster_sizes(p);
  std::vector<int> candidates;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    if (sizes[r] >= 2) {
      candidates.push_back(static_cast<int>(r));
    }
  }
  const int cluster =
      candidates[static_cast<std::size_t>(rng.next_u64() % candidates.size())];
  std::vector<int> members;
  for (std::size_t level = 0; level < partition.assign[p].size(); ++level) {
    if (partition.assign[p][level] == cluster) {
      members.push_back(static_cast<int>(level));
    }
  }
  // members[0] stays; a uniform nonempty subset of the rest moves.
  const std::size_t others = members.size() - 1;
  std::vector<int> moved;
  do {
    moved.clear();
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < others; ++i) {
      if (i % 64 == 0) {
        bits = rng.next_u64();
      }
      if ((bits >> (i % 64)) & 1u) {
        moved.push_back(members[i + 1]);
      }
    }
  } while (moved.empty());
  Proposal out;
  out.log_proposal_ratio = split_log_proposal_ratio(partition, p, cluster);
  out.next = apply_split(partition, p, cluster, moved);
  return out;
}

Proposal propose_merge(const Partition& partition, std::size_t p, Rng& rng) {
  const int k = partition.k[p];
  if (k < 2) {
    throw std::invalid_argument("merge needs at least two clusters");
  }
  const auto pairs = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k - 1) / 2;
  auto pick = rng.next_u64() % pairs;
  int r1 = 0, r2 = 1;
  for (r1 = 0; r1 < k - 1; ++r1) {
    const auto row = static_cast<std::uint64_t>(k - 1 - r1);
    if (pick < row) {
      r2 = r1 + 1 + static_cast<int>(pick);
      break;
    }
    pick -= row;
  }
  Proposal out;
  out.log_proposal_ratio = merge_log_proposal_ratio(partition, p, r1, r2);
  out.next = apply_merge(partition, p, r1, r2);
  return out;
}

std::vector<double> KTrace::inclusion_proportions() const {
  if (k.empty()) {
    return {};
  }
  std::vector<double> out(k.front().size(), 0.0);
  for (const auto& row : k) {
    for (std::size_t p = 0; p < row.size(); ++p) {
      out[p] += row[p] > 1 ? 1.0 : 0.0;
    }
  }
  for (double& v : out) {
    v /= static_cast<double>(k.size());
  }
  return out;
}

LagSelectionResult sample_K(const LaggedDesign& design, const Hyperparams& hyper,
                            const LagSelectionOptions& options, Rng& rng) {
  hyper.validate();
  const double a = hyper.shape();
  const std::size_t P = design.predictors();
  MarginalLikelihood marginal(design, a, hyper.b, hyper.cell_cap);

  Partition state = Partition::trivial(design.level_counts());
  double current = options.use_likelihood ? marginal(state) : 0.0;

  LagSelectionResult result;
  std::map<std::vector<int>, std::size_t> k_visits;
  std::vector<Partition> retained;
  retained.reserve(options.iters);

  for (std::size_t it = 0; it < options.burnin + options.iters; ++it) {
    for (std::size_t p = 0; p < P; ++p) {
      const int c = state.levels(p);
      if (c < 2) {
        continue;
      }
      const int k = state.k[p];
      const bool split = rng.uniform() < split_move_probability(k, c);
      Proposal proposal = split ? propose_split(state, p, rng) : propose_merge(state, p, rng);
      (split ? result.trace.split_proposed : result.trace.merge_proposed) += 1;

      double proposed = 0.0;
      if (options.use_likelihood) {
        try {
          proposed = marginal(proposal.next);
        } catch (const CellCapExceeded&) {
          ++result.trace.cap_rejections;
          continue;
        }
      } else if (!within_cap(proposal.next.k, hyper.cell_cap)) {
        ++result.trace.cap_rejections;
        continue;
      }
      const int lag = design.predictor(p).lag;
      const double log_alpha = proposed - current +
                               log_k_prior(proposal.next.k[p], c, lag, hyper.phi) -
                               log_k_prior(k, c, lag, hyper.phi) + proposal.log_proposal_ratio;
      if (log_alpha >= 0.0 || std::log(rng.uniform()) < log_alpha) {
        state = std::move(proposal.next);
        current = proposed;
        (split ? result.trace.split_accepted : result.trace.merge_accepted) += 1;
      }
    }
    if (it >= options.burnin) {
      result.trace.k.push_back(state.k);
      ++k_visits[state.k];
      retained.push_back(state.canonical());
    }
  }

  result.inclusion = result.trace.inclusion_proportions();
  if (retained.empty()) {
    result.mode = state.canonical();
    return result;
  }
  // Most visited K; ties resolve to the lexicographically smallest.
  const auto modal = std::max_element(k_visits.begin(), k_visits.end(),
                                      [](const auto& x, const auto& y) {
                                        return x.second < y.second;
                                      })->first;
  result.mode = Partition::trivial(design.level_counts());
  for (std::size_t p = 0; p < P; ++p) {
    std::map<std::vector<int>, std::size_t> visits;
    for (const auto& part : retained) {
      if (part.k[p] == modal[p]) {
        ++visits[part.assign[p]];
      }
    }
    const auto best = std::max_element(visits.begin(), visits.end(),
                                       [](const auto& x, const auto& y) {
                                         return x.second < y.second;
                                       });
    result.mode.assign[p] = best->first;
    result.mode.k[p] = modal[p];
  }
  return result;
}

} // namespace btf
