#pragma once

// Experiment configuration: INI sections [scenario], [split], [experiment],
// [hyper], [mixture], [lags], [chain] and [par]. Every key is optional and
// falls back to the defaults below; a `preset` key in [scenario] loads a
// named scenario before the remaining keys are applied.

#include "btf/datagen.hpp"
#include "btf/par_baseline.hpp"
#include "btf/two_step.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace btfcli {

struct ExperimentConfig {
  btf::ScenarioSpec scenario;
  std::size_t pre_training = 3000;
  std::size_t training = 1000;
  std::size_t max_lag = 10;

  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::vector<std::size_t> targets{0};

  btf::Hyperparams hyper;
  btf::TwoStepOptions two_step;

  /// 0 selects the true maximal lag of the scenario plus two.
  std::size_t par_q_max = 0;
  std::vector<btf::Criterion> criteria{btf::Criterion::AIC, btf::Criterion::BIC};
  /// Lag-1 cross terms of the other series in the PAR baseline.
  bool par_cross = false;
  btf::ParChainOptions par_chain;

  std::size_t effective_q_max() const;
  /// Throws btf::ConfigError.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every field, so parse(write(c)) == c.
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Scenario-only form used by `simulate --spec`.
btf::ScenarioSpec parse_scenario(std::istream& in);

std::string criterion_name(btf::Criterion c);
btf::Criterion parse_criterion(const std::string& text);

} // namespace btfcli
