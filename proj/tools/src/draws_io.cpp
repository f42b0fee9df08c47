#include "btfcli/draws_io.hpp"

#include "btf/csv.hpp"
#include "btf/error.hpp"

#include <charconv>
#include <fstream>

namespace btfcli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw btf::SchemaError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw btf::SchemaError("cannot read " + path.string());
  return in;
}

long long to_int(const std::string& s, const fs::path& path, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw btf::SchemaError(path.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

// Reads data rows of a CSV with a fixed column count, skipping the header.
template <class F>
void for_rows(const fs::path& path, std::size_t columns, F&& f) {
  auto in = open_in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1 || line.empty()) continue;
    auto cols = btf::split_csv_line(line);
    if (cols.size() != columns) {
      throw btf::SchemaError(path.string() + ":" + std::to_string(n) + ": expected " +
                             std::to_string(columns) + " columns");
    }
    f(cols, n);
  }
}

} // namespace

void write_btf_draws(const fs::path& dir, const std::vector<btf::PosteriorDraw>& draws) {
  fs::create_directories(dir);
  auto atoms = open_out(dir / "atoms.csv");
  auto cells = open_out(dir / "cells.csv");
  auto pi = open_out(dir / "pi.csv");
  atoms << "draw,atom,weight,rate\n";
  cells << "draw,cell,atom\n";
  pi << "draw,predictor,level,cluster,probability\n";
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const auto& draw = draws[d];
    for (std::size_t l = 0; l < draw.pistar.size(); ++l) {
      atoms << d << ',' << l << ',' << btf::format_double(draw.pistar[l]) << ','
            << btf::format_double(draw.lambdastar[l]) << '\n';
    }
    for (std::size_t c = 0; c < draw.zstar.size(); ++c) {
      cells << d << ',' << c << ',' << draw.zstar[c] << '\n';
    }
    for (std::size_t p = 0; p < draw.pi.size(); ++p) {
      for (int w = 0; w < draw.levels[p]; ++w) {
        for (int h = 0; h < draw.k[p]; ++h) {
          pi << d << ',' << p << ',' << w << ',' << h << ','
             << btf::format_double(draw.kernel(p, w, h)) << '\n';
        }
      }
    }
  }
}

std::vector<btf::PosteriorDraw> read_btf_draws(const fs::path& dir, const std::vector<int>& k,
                                               const std::vector<int>& levels) {
  if (k.size() != levels.size()) throw btf::SchemaError("k and levels differ in length");
  std::vector<btf::PosteriorDraw> draws;
  auto draw_at = [&](long long d, const fs::path& path, std::size_t line) -> btf::PosteriorDraw& {
    if (d < 0 || static_cast<std::size_t>(d) > draws.size()) {
      throw btf::SchemaError(path.string() + ":" + std::to_string(line) + ": draws out of order");
    }
    if (static_cast<std::size_t>(d) == draws.size()) {
      btf::PosteriorDraw fresh;
      fresh.k = k;
      fresh.levels = levels;
      for (std::size_t p = 0; p < k.size(); ++p) {
        fresh.pi.emplace_back(static_cast<std::size_t>(k[p] * levels[p]), 0.0);
      }
      draws.push_back(std::move(fresh));
    }
    return draws[static_cast<std::size_t>(d)];
  };
  const fs::path atoms = dir / "atoms.csv";
  for_rows(atoms, 4, [&](const auto& c, std::size_t n) {
    auto& draw = draw_at(to_int(c[0], atoms, n), atoms, n);
    if (to_int(c[1], atoms, n) != static_cast<long long>(draw.pistar.size())) {
      throw btf::SchemaError(atoms.string() + ":" + std::to_string(n) + ": atoms out of order");
    }
    draw.pistar.push_back(btf::parse_double(c[2]));
    draw.lambdastar.push_back(btf::parse_double(c[3]));
  });
  std::uint64_t cells_per_draw = 1;
  for (int kp : k) cells_per_draw *= static_cast<std::uint64_t>(kp);
  const fs::path cells = dir / "cells.csv";
  for_rows(cells, 3, [&](const auto& c, std::size_t n) {
    const long long d = to_int(c[0], cells, n);
    if (d < 0 || static_cast<std::size_t>(d) >= draws.size()) {
      throw btf::SchemaError(cells.string() + ":" + std::to_string(n) + ": unknown draw");
    }
    auto& draw = draws[static_cast<std::size_t>(d)];
    if (to_int(c[1], cells, n) != static_cast<long long>(draw.zstar.size())) {
      throw btf::SchemaError(cells.string() + ":" + std::to_string(n) + ": cells out of order");
    }
    draw.zstar.push_back(static_cast<std::uint32_t>(to_int(c[2], cells, n)));
  });
  const fs::path pi = dir / "pi.csv";
  for_rows(pi, 5, [&](const auto& c, std::size_t n) {
    const long long d = to_int(c[0], pi, n);
    const long long p = to_int(c[1], pi, n);
    const long long w = to_int(c[2], pi, n);
    const long long h = to_int(c[3], pi, n);
    if (d < 0 || static_cast<std::size_t>(d) >= draws.size() || p < 0 ||
        static_cast<std::size_t>(p) >= k.size() || w < 0 || w >= levels[p] || h < 0 || h >= k[p]) {
      throw btf::SchemaError(pi.string() + ":" + std::to_string(n) + ": index out of range");
    }
    draws[d].pi[p][static_cast<std::size_t>(w * k[p] + h)] = btf::parse_double(c[4]);
  });
  for (const auto& draw : draws) {
    if (draw.zstar.size() != cells_per_draw) {
      throw btf::SchemaError(cells.string() + ": wrong number of cells per draw");
    }
  }
  return draws;
}

void write_par_draws(const fs::path& path, const btf::ParChainResult& chain,
                     const std::vector<std::string>& names) {
  auto out = open_out(path);
  out << "draw";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t d = 0; d < chain.draws.size(); ++d) {
    out << d;
    for (double v : chain.draws[d]) out << ',' << btf::format_double(v);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_par_draws(const fs::path& path, std::size_t columns) {
  std::vector<std::vector<double>> draws;
  for_rows(path, columns + 1, [&](const auto& c, std::size_t n) {
    if (to_int(c[0], path, n) != static_cast<long long>(draws.size())) {
      throw btf::SchemaError(path.string() + ":" + std::to_string(n) + ": draws out of order");
    }
    std::vector<double> row;
    for (std::size_t i = 1; i < c.size(); ++i) row.push_back(btf::parse_double(c[i]));
    draws.push_back(std::move(row));
  });
  return draws;
}

} // namespace btfcli
