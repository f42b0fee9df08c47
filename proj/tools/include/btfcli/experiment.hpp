#pragma once

#include "btfcli/config.hpp"

#include "btf/evaluation.hpp"
#include "btf/two_step.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace btfcli {

struct ReplicateRecord {
  std::size_t replicate = 0;
  std::size_t target = 0;
  std::string model;
  std::size_t order = 0; // selected PAR order; 0 for BTF
  double score = 0.0;
  std::size_t floored = 0;
};

struct ExperimentResult {
  btf::ComparisonTable table;
  std::vector<ReplicateRecord> records; // replicate-major, deterministic order
};

/// Generates `replicates` datasets and scores the PAR baseline (once per
/// criterion) and BTF on each target. Replicate r draws everything from
/// Rng(seed).fork(r): data from fork(0), labelling from fork(1), BTF from
/// fork(2), PAR from fork(3). Up to `jobs` replicates run concurrently;
/// results do not depend on `jobs`.
///
/// `inspect`, when set, sees every BTF fit with its replicate index. It runs
/// on worker threads.
using FitInspector = std::function<void(std::size_t replicate, const btf::TargetFit& fit)>;
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs = 1,
                                const FitInspector& inspect = {});

/// Data of replicate r, as `simulate --replicate r` writes it.
btf::CountSeries replicate_data(const btf::ScenarioSpec& spec, std::uint64_t seed,
                                std::size_t replicate);

void write_records_csv(std::ostream& out, const std::vector<ReplicateRecord>& records);

} // namespace btfcli
