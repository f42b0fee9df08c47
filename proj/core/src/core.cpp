#include "btf/core.hpp"

#include "btf/error.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace btf {

CountSeries::CountSeries(std::vector<std::vector<Count>> values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (values_.empty()) {
    throw SchemaError("count series must contain at least one series");
  }
  if (names_.empty()) {
    for (std::size_t m = 0; m < values_.size(); ++m) {
      names_.push_back("y" + std::to_string(m + 1));
    }
  }
  if (names_.size() != values_.size()) {
    throw SchemaError("expected " + std::to_string(values_.size()) + " series names, got " +
                      std::to_string(names_.size()));
  }
  const std::size_t length = values_.front().size();
  for (std::size_t m = 0; m < values_.size(); ++m) {
    if (values_[m].size() != length) {
      throw SchemaError("series '" + names_[m] + "' has length " +
                        std::to_string(values_[m].size()) + ", expected " +
                        std::to_string(length));
    }
    const auto negative = std::find_if(values_[m].begin(), values_[m].end(),
                                       [](Count v) { return v < 0; });
    if (negative != values_[m].end()) {
      throw SchemaError("series '" + names_[m] + "' has a negative count at t=" +
                        std::to_string(negative - values_[m].begin()));
    }
  }
}

CountSeries CountSeries::univariate(std::vector<Count> values, std::string name) {
  std::vector<std::vector<Count>> rows;
  rows.push_back(std::move(values));
  return CountSeries(std::move(rows), {std::move(name)});
}

DataSplit make_split(std::size_t length, std::size_t pre_training_len,
                     std::size_t training_len, std::size_t max_lag) {
  if (max_lag == 0) {
    throw SchemaError("maximal lag q must be at least 1");
  }
  if (pre_training_len == 0 || training_len == 0) {
    throw SchemaError("pre-training and training segments must be non-empty");
  }
  if (training_len <= max_lag) {
    throw SchemaError("training shorter than lag window: T2=" + std::to_string(training_len) +
                      " <= q=" + std::to_string(max_lag));
  }
  if (pre_training_len + training_len > length) {
    throw SchemaError("T1+T2=" + std::to_string(pre_training_len + training_len) +
                      " exceeds series length " + std::to_string(length));
  }
  return DataSplit{pre_training_len, training_len, length - pre_training_len - training_len,
                   max_lag};
}

void Hyperparams::validate() const {
  if (!(gamma > 0.0) || !(phi > 0.0) || !(b > 0.0) || !(alpha0 > 0.0)) {
    throw std::invalid_argument("hyperparameters gamma, phi, b, alpha0 must be positive");
  }
  if (a && !(*a > 0.0)) {
    throw std::invalid_argument("Gamma shape a must be positive");
  }
  if (truncation < 1) {
    throw std::invalid_argument("stick-breaking truncation L must be at least 1");
  }
  if (cell_cap < 1) {
    throw std::invalid_argument("cell cap must be at least 1");
  }
}

double mid_range_shape(std::span<const Count> responses) {
  if (responses.empty()) {
    return 1.0;
  }
  const auto [lo, hi] = std::minmax_element(responses.begin(), responses.end());
  const double half_range = 0.5 * static_cast<double>(*hi - *lo);
  return half_range > 0.0 ? half_range : 1.0;
}

Hyperparams Hyperparams::resolved(std::span<const Count> training_responses) const {
  Hyperparams out = *this;
  if (!out.a) {
    out.a = mid_range_shape(training_responses);
  }
  out.validate();
  return out;
}

double Hyperparams::shape() const {
  if (!a) {
    throw std::logic_error("Gamma shape a has not been resolved");
  }
  return *a;
}

std::uint64_t checked_cell_count(std::span<const int> radices, std::uint64_t cap) {
  std::uint64_t product = 1;
  for (int k : radices) {
    if (k < 1) {
      throw std::invalid_argument("cluster counts must be at least 1");
    }
    product *= static_cast<std::uint64_t>(k);
    if (product > cap) {
      throw CellCapExceeded("cell space exceeds cap of " + std::to_string(cap) + " cells");
    }
  }
  return product;
}

CellIndex::CellIndex(std::vector<int> radices, std::uint64_t cap)
    : CellIndex(radices, [&] {
        std::vector<int> order(radices.size());
        std::iota(order.begin(), order.end(), 0);
        return order;
      }(), cap) {}

CellIndex::CellIndex(std::vector<int> radices, std::vector<int> significance, std::uint64_t cap)
    : radices_(std::move(radices)), strides_(radices_.size(), 0) {
  size_ = static_cast<std::size_t>(checked_cell_count(radices_, cap));
  if (significance.size() != radices_.size()) {
    throw std::invalid_argument("significance order must list every predictor once");
  }
  std::vector<bool> seen(radices_.size(), false);
  std::uint64_t stride = 1;
  for (int p : significance) {
    if (p < 0 || static_cast<std::size_t>(p) >= radices_.size() || seen[p]) {
      throw std::invalid_argument("significance order must be a permutation of predictors");
    }
    seen[p] = true;
    strides_[p] = stride;
    stride *= static_cast<std::uint64_t>(radices_[p]);
  }
}

std::uint64_t CellIndex::encode(std::span<const int> tuple) const {
  if (tuple.size() != radices_.size()) {
    throw std::invalid_argument("cell tuple has wrong number of components");
  }
  std::uint64_t linear = 0;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    if (tuple[j] < 0 || tuple[j] >= radices_[j]) {
      throw std::out_of_range("cell component " + std::to_string(j) + " = " +
                              std::to_string(tuple[j]) + " outside [0," +
                              std::to_string(radices_[j]) + ")");
    }
    linear += static_cast<std::uint64_t>(tuple[j]) * strides_[j];
  }
  return linear;
}

void CellIndex::decode(std::uint64_t linear, std::span<int> tuple) const {
  if (linear >= size_) {
    throw std::out_of_range("linear cell index " + std::to_string(linear) + " out of range");
  }
  if (tuple.size() != radices_.size()) {
    throw std::invalid_argument("cell tuple has wrong number of components");
  }
  for (std::size_t j = 0; j < radices_.size(); ++j) {
    tuple[j] = static_cast<int>((linear / strides_[j]) % static_cast<std::uint64_t>(radices_[j]));
  }
}

std::vector<int> CellIndex::decode(std::uint64_t linear) const {
  std::vector<int> tuple(radices_.size());
  decode(linear, tuple);
  return tuple;
}

} // namespace btf
