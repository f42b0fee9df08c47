#pragma once

// CSV dumps of posterior draws, exact enough to re-evaluate predictions
// without re-running a chain.
//
//   atoms.csv  draw,atom,weight,rate
//   cells.csv  draw,cell,atom          (canonical cell order)
//   pi.csv     draw,predictor,level,cluster,probability

#include "btf/btf_gibbs.hpp"
#include "btf/par_baseline.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace btfcli {

void write_btf_draws(const std::filesystem::path& dir, const std::vector<btf::PosteriorDraw>& draws);

/// `k` and `levels` give the cluster and level counts per predictor.
std::vector<btf::PosteriorDraw> read_btf_draws(const std::filesystem::path& dir,
                                               const std::vector<int>& k,
                                               const std::vector<int>& levels);

/// draw,<coefficient names...>
void write_par_draws(const std::filesystem::path& path, const btf::ParChainResult& chain,
                     const std::vector<std::string>& names);
std::vector<std::vector<double>> read_par_draws(const std::filesystem::path& path,
                                                std::size_t columns);

} // namespace btfcli
