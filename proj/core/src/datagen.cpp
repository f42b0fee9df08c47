#include "btf/datagen.hpp"

#include "btf/distributions.hpp"
#include "btf/error.hpp"

#include <algorithm>
#include <cmath>

namespace btf {

namespace {

constexpr std::size_t kParBurnin = 200;
constexpr std::size_t kMultiHistory = 10;

ScenarioSpec par(std::string name, std::map<int, double> beta) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.design = DesignKind::Par;
  s.beta0 = 1.0;
  s.beta = std::move(beta);
  return s;
}

ScenarioSpec nonlinear(std::string name, double nu_plus, double nu_minus, std::vector<int> lags) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.design = DesignKind::Nonlinear;
  s.nu_plus = nu_plus;
  s.nu_minus = nu_minus;
  s.lags = std::move(lags);
  return s;
}

// Terms are written 1-based as (series, lag) and stored zero-based.
ScenarioSpec multi(std::string name, std::size_t m, double nu_minus, double nu_plus,
                   std::vector<std::vector<std::pair<int, int>>> deps) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.design = DesignKind::MultiNonlinear;
  s.series_count = m;
  s.nu_minus = nu_minus;
  s.nu_plus = nu_plus;
  s.dependencies.resize(m);
  for (std::size_t i = 0; i < deps.size(); ++i) {
    for (auto [series, lag] : deps[i]) {
      s.dependencies[i].push_back({static_cast<std::size_t>(series - 1), lag});
    }
  }
  return s;
}

std::vector<ScenarioSpec> build_presets() {
  return {
      par("table1-A", {{1, 0.5}}),
      par("table1-B", {{7, 0.5}}),
      par("table1-C", {{29, 0.7}}),
      par("table1-D", {{1, -0.5}, {7, 0.5}}),
      par("table1-E", {{19, -0.5}, {29, 0.5}}),
      par("table1-F", {{1, -0.5}, {7, -0.5}, {19, 0.5}}),
      nonlinear("table2-A", 30, 50, {1}),
      nonlinear("table2-B", 30, 50, {7}),
      nonlinear("table2-C", 20, 100, {3, 7}),
      nonlinear("table2-D", 20, 100, {7, 9}),
      nonlinear("table2-E", 20, 100, {3, 7, 9}),
      nonlinear("table2-F", 20, 100, {7, 8, 9}),
      multi("table3-A", 2, 20, 10, {{{1, 1}, {2, 1}}}),
      multi("table3-B", 2, 20, 10, {{{1, 3}, {2, 5}}}),
      multi("table3-C", 2, 20, 10, {{{2, 1}}, {{1, 2}}}),
      multi("table3-D", 2, 20, 10, {{{1, 3}, {2, 4}}, {{1, 1}, {2, 3}, {2, 5}}}),
      multi("table3-E", 3, 20, 10, {{{2, 1}}, {{3, 2}}, {{1, 3}}}),
      multi("table3-F", 3, 60, 20,
            {{{1, 3}, {2, 4}, {3, 1}}, {{1, 1}, {2, 2}, {3, 5}}, {{1, 3}, {2, 2}, {3, 5}}}),
  };
}

} // namespace

std::string to_string(DesignKind kind) {
  switch (kind) {
  case DesignKind::Par: return "par";
  case DesignKind::Nonlinear: return "nonlinear";
  case DesignKind::MultiNonlinear: return "multi_nonlinear";
  }
  return "unknown";
}

DesignKind parse_design_kind(const std::string& text) {
  if (text == "par") return DesignKind::Par;
  if (text == "nonlinear") return DesignKind::Nonlinear;
  if (text == "multi_nonlinear") return DesignKind::MultiNonlinear;
  throw ConfigError("unknown design '" + text + "'");
}

int ScenarioSpec::max_lag() const {
  int q = 0;
  switch (design) {
  case DesignKind::Par:
    for (const auto& [lag, coef] : beta) q = std::max(q, lag);
    break;
  case DesignKind::Nonlinear:
    for (int lag : lags) q = std::max(q, lag);
    break;
  case DesignKind::MultiNonlinear:
    for (const auto& terms : dependencies)
      for (const auto& term : terms) q = std::max(q, term.lag);
    break;
  }
  return q;
}

void ScenarioSpec::validate() const {
  if (length == 0) {
    throw ConfigError("scenario length must be positive");
  }
  switch (design) {
  case DesignKind::Par:
    for (const auto& [lag, coef] : beta) {
      if (lag < 1) throw ConfigError("PAR lags must be >= 1");
      if (!std::isfinite(coef)) throw ConfigError("PAR coefficients must be finite");
    }
    if (!std::isfinite(beta0)) throw ConfigError("beta0 must be finite");
    return;
  case DesignKind::Nonlinear:
    if (lags.empty()) throw ConfigError("nonlinear design needs at least one lag");
    for (int lag : lags)
      if (lag < 1) throw ConfigError("lags must be >= 1");
    break;
  case DesignKind::MultiNonlinear:
    if (series_count < 1) throw ConfigError("series count must be >= 1");
    if (dependencies.size() > series_count) throw ConfigError("more dependency sets than series");
    for (const auto& terms : dependencies)
      for (const auto& term : terms) {
        if (term.lag < 1) throw ConfigError("lags must be >= 1");
        if (term.series >= series_count) throw ConfigError("dependency on unknown series");
      }
    break;
  }
  if (!(nu_plus > 0.0) || !(nu_minus > 0.0)) {
    throw ConfigError("nu_plus and nu_minus must be positive");
  }
}

CountSeries gen_par(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.design != DesignKind::Par) throw ConfigError("gen_par needs a PAR spec");
  const std::size_t q = static_cast<std::size_t>(spec.max_lag());
  const std::size_t total = kParBurnin + spec.length;
  // log(y + 1) history, zero-initialised before the burn-in.
  std::vector<double> log_hist(q + total, 0.0);
  std::vector<Count> y(spec.length);
  for (std::size_t i = 0; i < total; ++i) {
    double eta = spec.beta0;
    for (const auto& [lag, coef] : spec.beta) {
      eta += coef * log_hist[q + i - static_cast<std::size_t>(lag)];
    }
    const Count draw = sample_poisson(std::exp(eta), rng);
    log_hist[q + i] = std::log(static_cast<double>(draw) + 1.0);
    if (i >= kParBurnin) {
      y[i - kParBurnin] = draw;
    }
  }
  return CountSeries::univariate(std::move(y));
}

CountSeries gen_nonlinear(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.design != DesignKind::Nonlinear) throw ConfigError("gen_nonlinear needs a nonlinear spec");
  const auto history = static_cast<std::size_t>(spec.max_lag());
  const double threshold = static_cast<double>(spec.lags.size()) * spec.nu_plus;
  std::vector<Count> y(spec.length);
  for (std::size_t t = 0; t < spec.length; ++t) {
    if (t < history) {
      y[t] = sample_poisson(spec.nu_minus, rng);
      continue;
    }
    Count sum = 0;
    for (int lag : spec.lags) sum += y[t - static_cast<std::size_t>(lag)];
    y[t] = sample_poisson(static_cast<double>(sum) >= threshold ? spec.nu_plus : spec.nu_minus, rng);
  }
  return CountSeries::univariate(std::move(y));
}

CountSeries gen_multi_nonlinear(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.design != DesignKind::MultiNonlinear) {
    throw ConfigError("gen_multi_nonlinear needs a multivariate spec");
  }
  const std::size_t m_count = spec.series_count;
  const std::size_t history = std::max(kMultiHistory, static_cast<std::size_t>(spec.max_lag()));
  std::vector<std::vector<Count>> y(m_count, std::vector<Count>(spec.length));
  for (std::size_t t = 0; t < spec.length; ++t) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const bool driven = t >= history && m < spec.dependencies.size() && !spec.dependencies[m].empty();
      double rate = spec.nu_minus;
      if (driven) {
        Count sum = 0;
        for (const auto& term : spec.dependencies[m]) {
          sum += y[term.series][t - static_cast<std::size_t>(term.lag)];
        }
        rate = static_cast<double>(sum) >= spec.nu_minus ? spec.nu_plus : spec.nu_minus;
      }
      y[m][t] = sample_poisson(rate, rng);
    }
  }
  std::vector<std::string> names;
  for (std::size_t m = 0; m < m_count; ++m) names.push_back("y" + std::to_string(m + 1));
  return CountSeries(std::move(y), std::move(names));
}

CountSeries generate(const ScenarioSpec& spec, Rng& rng) {
  switch (spec.design) {
  case DesignKind::Par: return gen_par(spec, rng);
  case DesignKind::Nonlinear: return gen_nonlinear(spec, rng);
  case DesignKind::MultiNonlinear: return gen_multi_nonlinear(spec, rng);
  }
  throw ConfigError("unknown design");
}

const std::vector<ScenarioSpec>& scenario_presets() {
  static const std::vector<ScenarioSpec> presets = build_presets();
  return presets;
}

const ScenarioSpec& scenario_preset(const std::string& name) {
  for (const auto& spec : scenario_presets()) {
    if (spec.name == name) return spec;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

} // namespace btf
