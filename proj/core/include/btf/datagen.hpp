#pragma once

// Seeded generators for the simulation designs: Poisson autoregression,
// the univariate threshold model and its multivariate variant.

#include "btf/core.hpp"
#include "btf/random.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace btf {

enum class DesignKind { Par, Nonlinear, MultiNonlinear };

std::string to_string(DesignKind kind);
DesignKind parse_design_kind(const std::string& text);

/// A lagged value y_{series, t - lag}; series zero-based, lag >= 1.
struct LagTerm {
  std::size_t series = 0;
  int lag = 1;
  bool operator==(const LagTerm&) const = default;
};

struct ScenarioSpec {
  std::string name;
  DesignKind design = DesignKind::Par;
  std::size_t length = 5000;

  // Par
  double beta0 = 0.0;
  std::map<int, double> beta; // lag -> coefficient

  // Nonlinear
  std::vector<int> lags;
  double nu_plus = 1.0;
  double nu_minus = 1.0;

  // MultiNonlinear: dependencies[m] drives series m; empty means iid PD(nu_minus).
  std::size_t series_count = 1;
  std::vector<std::vector<LagTerm>> dependencies;

  /// Largest lag referenced by the generating process.
  int max_lag() const;
  /// Throws ConfigError on an inconsistent spec.
  void validate() const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// y_t ~ PD(exp(beta0 + sum_i beta_i ln(y_{t-i} + 1))), after 200 discarded
/// steps from a zero history.
CountSeries gen_par(const ScenarioSpec& spec, Rng& rng);

/// First max-lag points iid PD(nu_-); afterwards PD(nu_+) when the important
/// lags sum to at least K nu_+, PD(nu_-) otherwise.
CountSeries gen_nonlinear(const ScenarioSpec& spec, Rng& rng);

/// First max(10, max-lag) points iid PD(nu_-) for every series; afterwards a
/// series with declared dependencies is PD(nu_+) when they sum to at least
/// nu_-, PD(nu_-) otherwise.
CountSeries gen_multi_nonlinear(const ScenarioSpec& spec, Rng& rng);

CountSeries generate(const ScenarioSpec& spec, Rng& rng);

/// Named presets table1-A .. table3-F.
const std::vector<ScenarioSpec>& scenario_presets();
/// Throws ConfigError for an unknown name.
const ScenarioSpec& scenario_preset(const std::string& name);

} // namespace btf
