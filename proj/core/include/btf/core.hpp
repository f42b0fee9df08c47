#pragma once

// Shared data model: count series, the pre-training/training/test split,
// model hyperparameters and mixed-radix addressing of the latent cell space.
//
// All indices are zero-based. Time t runs over [0, T); cluster indices h_j
// over [0, k_j); mixture labels over [0, c).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace btf {

using Count = std::int64_t;

/// M aligned series of nonnegative counts, each of length T.
class CountSeries {
public:
  CountSeries() = default;
  CountSeries(std::vector<std::vector<Count>> values, std::vector<std::string> names);

  /// Single unnamed series.
  static CountSeries univariate(std::vector<Count> values, std::string name = "y");

  std::size_t num_series() const { return values_.size(); }
  std::size_t length() const { return values_.empty() ? 0 : values_.front().size(); }

  std::span<const Count> series(std::size_t m) const { return values_.at(m); }
  Count at(std::size_t m, std::size_t t) const { return values_[m][t]; }
  const std::vector<std::string>& names() const { return names_; }

private:
  std::vector<std::vector<Count>> values_;
  std::vector<std::string> names_;
};

/// Three contiguous segments [0,T1) pre-training, [T1,T1+T2) training,
/// [T1+T2,T) test, together with the maximal lag q.
struct DataSplit {
  std::size_t pre_training_len = 0;
  std::size_t training_len = 0;
  std::size_t test_len = 0;
  std::size_t max_lag = 0;

  std::size_t total() const { return pre_training_len + training_len + test_len; }
  std::size_t training_begin() const { return pre_training_len; }
  std::size_t test_begin() const { return pre_training_len + training_len; }
  /// First time index that enters the training likelihood.
  std::size_t likelihood_begin() const { return pre_training_len + max_lag; }
  /// One past the last training likelihood index.
  std::size_t likelihood_end() const { return test_begin(); }
  std::size_t likelihood_size() const { return training_len - max_lag; }

  bool operator==(const DataSplit&) const = default;
};

/// Validates and builds a split; the test segment is the remaining suffix.
/// Throws SchemaError when T2 <= q, T1 + T2 > T, T1 == 0 or q == 0. An empty
/// test segment is allowed for fit-only runs.
DataSplit make_split(std::size_t length, std::size_t pre_training_len,
                     std::size_t training_len, std::size_t max_lag);

struct Hyperparams {
  double gamma = 0.1;     // Dirichlet concentration of pi^(j)
  double phi = 0.5;       // lag penalty in p(k_j) ~ exp(-phi j k_j)
  std::optional<double> a; // Gamma shape of atom rates; mid-range of training counts when unset
  double b = 1.0;         // Gamma rate of atom rates
  double alpha0 = 1.0;    // stick-breaking concentration
  std::size_t truncation = 100;
  std::uint64_t cell_cap = 1'000'000;

  /// Throws std::invalid_argument on non-positive values.
  void validate() const;

  /// Returns a copy with `a` filled in from the training responses.
  Hyperparams resolved(std::span<const Count> training_responses) const;

  double shape() const;

  bool operator==(const Hyperparams&) const = default;
};

/// Half the range of the counts; falls back to 1 when the range is zero.
double mid_range_shape(std::span<const Count> responses);

/// Bijective mixed-radix map between cluster tuples (h_1..h_P) and a linear
/// index in [0, prod k_j). By default predictor 0 varies fastest; an explicit
/// significance order lists predictors from fastest to slowest.
class CellIndex {
public:
  CellIndex() = default;
  explicit CellIndex(std::vector<int> radices,
                     std::uint64_t cap = Hyperparams{}.cell_cap);
  CellIndex(std::vector<int> radices, std::vector<int> significance,
            std::uint64_t cap = Hyperparams{}.cell_cap);

  std::size_t size() const { return size_; }
  std::size_t predictors() const { return radices_.size(); }
  const std::vector<int>& radices() const { return radices_; }
  std::uint64_t stride(std::size_t predictor) const { return strides_[predictor]; }

  std::uint64_t encode(std::span<const int> tuple) const;
  std::vector<int> decode(std::uint64_t linear) const;
  void decode(std::uint64_t linear, std::span<int> tuple) const;

private:
  std::vector<int> radices_;
  std::vector<std::uint64_t> strides_;
  std::size_t size_ = 1;
};

/// Product of radices; throws CellCapExceeded when it exceeds `cap`.
std::uint64_t checked_cell_count(std::span<const int> radices, std::uint64_t cap);

} // namespace btf
