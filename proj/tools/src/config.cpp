#include "btfcli/config.hpp"

#include "btf/csv.hpp"
#include "btf/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace btfcli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw btf::ConfigError("'" + key + "' expects a nonnegative integer, got '" + s + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    return btf::parse_double(trim(s));
  } catch (const btf::SchemaError&) {
    throw btf::ConfigError("'" + key + "' expects a number, got '" + s + "'");
  }
}

bool to_bool(const std::string& key, const std::string& s) {
  const auto t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw btf::ConfigError("'" + key + "' expects true or false, got '" + s + "'");
}

// Reads section.key into `target` when present.
class Reader {
public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  }
  template <class T>
  void size(const std::string& path, T& target) const {
    if (auto v = get(path)) target = static_cast<T>(to_uint(path, *v));
  }
  void real(const std::string& path, double& target) const {
    if (auto v = get(path)) target = to_double(path, *v);
  }
  void flag(const std::string& path, bool& target) const {
    if (auto v = get(path)) target = to_bool(path, *v);
  }

private:
  const pt::ptree& tree_;
};

const std::vector<std::string> kSections = {"scenario", "split", "experiment", "hyper",
                                            "mixture",  "lags",  "chain",      "par"};

void check_sections(const pt::ptree& tree) {
  for (const auto& [name, section] : tree) {
    if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
      throw btf::ConfigError("unknown section [" + name + "]");
    }
  }
}

void read_scenario(const Reader& r, btf::ScenarioSpec& s) {
  if (auto preset = r.get("scenario.preset")) s = btf::scenario_preset(trim(*preset));
  if (auto v = r.get("scenario.name")) s.name = trim(*v);
  if (auto v = r.get("scenario.design")) s.design = btf::parse_design_kind(trim(*v));
  r.size("scenario.length", s.length);
  r.real("scenario.beta0", s.beta0);
  if (auto v = r.get("scenario.beta")) {
    s.beta.clear();
    for (const auto& term : split(*v, ',')) {
      const auto colon = term.find(':');
      if (colon == std::string::npos) throw btf::ConfigError("beta terms are lag:coefficient");
      s.beta[static_cast<int>(to_uint("scenario.beta", term.substr(0, colon)))] =
          to_double("scenario.beta", term.substr(colon + 1));
    }
  }
  if (auto v = r.get("scenario.lags")) {
    s.lags.clear();
    for (const auto& lag : split(*v, ',')) s.lags.push_back(static_cast<int>(to_uint("scenario.lags", lag)));
  }
  r.real("scenario.nu_plus", s.nu_plus);
  r.real("scenario.nu_minus", s.nu_minus);
  r.size("scenario.series", s.series_count);
  if (auto v = r.get("scenario.dependencies")) {
    // One group per driven series separated by '|'; terms series:lag, 1-based series.
    s.dependencies.clear();
    std::istringstream groups(*v);
    std::string group;
    while (std::getline(groups, group, '|')) {
      std::vector<btf::LagTerm> terms;
      for (const auto& term : split(group, ',')) {
        const auto colon = term.find(':');
        if (colon == std::string::npos) throw btf::ConfigError("dependency terms are series:lag");
        const auto series = to_uint("scenario.dependencies", term.substr(0, colon));
        if (series < 1) throw btf::ConfigError("dependency series are 1-based");
        terms.push_back({static_cast<std::size_t>(series - 1),
                         static_cast<int>(to_uint("scenario.dependencies", term.substr(colon + 1)))});
      }
      s.dependencies.push_back(std::move(terms));
    }
  }
  // Trailing series without dependencies may be omitted.
  if (s.design == btf::DesignKind::MultiNonlinear && s.dependencies.size() < s.series_count) {
    s.dependencies.resize(s.series_count);
  }
}

void write_scenario(std::ostream& out, const btf::ScenarioSpec& s) {
  out << "[scenario]\n";
  out << "name = " << s.name << "\n";
  out << "design = " << btf::to_string(s.design) << "\n";
  out << "length = " << s.length << "\n";
  out << "beta0 = " << btf::format_double(s.beta0) << "\n";
  out << "beta = ";
  bool first = true;
  for (const auto& [lag, coef] : s.beta) {
    out << (first ? "" : ", ") << lag << ':' << btf::format_double(coef);
    first = false;
  }
  out << "\nlags = ";
  for (std::size_t i = 0; i < s.lags.size(); ++i) out << (i ? ", " : "") << s.lags[i];
  out << "\nnu_plus = " << btf::format_double(s.nu_plus) << "\n";
  out << "nu_minus = " << btf::format_double(s.nu_minus) << "\n";
  out << "series = " << s.series_count << "\n";
  out << "dependencies = ";
  for (std::size_t m = 0; m < s.dependencies.size(); ++m) {
    out << (m ? " | " : "");
    for (std::size_t i = 0; i < s.dependencies[m].size(); ++i) {
      out << (i ? ", " : "") << s.dependencies[m][i].series + 1 << ':' << s.dependencies[m][i].lag;
    }
  }
  out << "\n";
}

pt::ptree read_tree(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw btf::ConfigError(std::string("config: ") + e.what());
  }
  check_sections(tree);
  return tree;
}

} // namespace

std::string criterion_name(btf::Criterion c) { return c == btf::Criterion::AIC ? "aic" : "bic"; }

btf::Criterion parse_criterion(const std::string& text) {
  const auto t = trim(text);
  if (t == "aic" || t == "AIC") return btf::Criterion::AIC;
  if (t == "bic" || t == "BIC") return btf::Criterion::BIC;
  throw btf::ConfigError("unknown criterion '" + text + "'");
}

std::size_t ExperimentConfig::effective_q_max() const {
  return par_q_max ? par_q_max : static_cast<std::size_t>(scenario.max_lag()) + 2;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (pre_training == 0 || training <= max_lag || max_lag == 0) {
    throw btf::ConfigError("split needs pre_training >= 1 and training > max_lag >= 1");
  }
  if (pre_training + training >= scenario.length) {
    throw btf::ConfigError("split leaves no test points");
  }
  if (replicates == 0) throw btf::ConfigError("replicates must be >= 1");
  const std::size_t m = scenario.design == btf::DesignKind::MultiNonlinear ? scenario.series_count : 1;
  if (targets.empty()) throw btf::ConfigError("at least one target is required");
  for (std::size_t t : targets) {
    if (t >= m) throw btf::ConfigError("target series out of range");
  }
  if (criteria.empty()) throw btf::ConfigError("at least one PAR criterion is required");
  if (two_step.chain.thin == 0) throw btf::ConfigError("thin must be >= 1");
  if (two_step.mixture.components == 0) throw btf::ConfigError("components must be >= 1");
  if (two_step.chain.iters == 0 || par_chain.iters == 0 || two_step.mixture.iters == 0 ||
      two_step.lags.iters == 0) {
    throw btf::ConfigError("iteration counts must be >= 1");
  }
  try {
    hyper.validate();
  } catch (const std::invalid_argument& e) {
    throw btf::ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  const auto tree = read_tree(in);
  const Reader r(tree);
  ExperimentConfig c;
  read_scenario(r, c.scenario);

  r.size("split.pre_training", c.pre_training);
  r.size("split.training", c.training);
  r.size("split.max_lag", c.max_lag);

  r.size("experiment.replicates", c.replicates);
  r.size("experiment.seed", c.seed);
  if (auto v = r.get("experiment.targets")) {
    c.targets.clear();
    for (const auto& t : split(*v, ',')) {
      const auto one_based = to_uint("experiment.targets", t);
      if (one_based < 1) throw btf::ConfigError("targets are 1-based series numbers");
      c.targets.push_back(static_cast<std::size_t>(one_based - 1));
    }
  }

  r.real("hyper.gamma", c.hyper.gamma);
  r.real("hyper.phi", c.hyper.phi);
  if (auto v = r.get("hyper.a")) {
    if (trim(*v) == "auto") c.hyper.a.reset();
    else c.hyper.a = to_double("hyper.a", *v);
  }
  r.real("hyper.b", c.hyper.b);
  r.real("hyper.alpha0", c.hyper.alpha0);
  r.size("hyper.truncation", c.hyper.truncation);
  r.size("hyper.cell_cap", c.hyper.cell_cap);

  auto& ts = c.two_step;
  r.size("mixture.components", ts.mixture.components);
  r.size("mixture.burnin", ts.mixture.burnin);
  r.size("mixture.iters", ts.mixture.iters);
  r.real("mixture.min_weight", ts.min_weight);
  r.real("mixture.merge_tol", ts.merge_tol);
  r.size("lags.burnin", ts.lags.burnin);
  r.size("lags.iters", ts.lags.iters);
  r.size("chain.burnin", ts.chain.burnin);
  r.size("chain.iters", ts.chain.iters);
  r.size("chain.thin", ts.chain.thin);
  r.size("chain.recompute_every", ts.chain.recompute_every);

  r.size("par.q_max", c.par_q_max);
  if (auto v = r.get("par.criteria")) {
    c.criteria.clear();
    for (const auto& t : split(*v, ',')) c.criteria.push_back(parse_criterion(t));
  }
  r.flag("par.cross", c.par_cross);
  r.size("par.burnin", c.par_chain.burnin);
  r.size("par.iters", c.par_chain.iters);
  r.real("par.intercept_precision", c.par_chain.intercept_precision);
  r.real("par.slope_precision", c.par_chain.slope_precision);
  r.real("par.target_acceptance", c.par_chain.target_acceptance);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw btf::ConfigError("cannot read config " + path.string());
  return parse_config(in);
}

btf::ScenarioSpec parse_scenario(std::istream& in) {
  const auto tree = read_tree(in);
  btf::ScenarioSpec s;
  read_scenario(Reader(tree), s);
  s.validate();
  return s;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  using btf::format_double;
  write_scenario(out, c.scenario);
  out << "\n[split]\n"
      << "pre_training = " << c.pre_training << "\n"
      << "training = " << c.training << "\n"
      << "max_lag = " << c.max_lag << "\n";
  out << "\n[experiment]\n"
      << "replicates = " << c.replicates << "\n"
      << "seed = " << c.seed << "\n"
      << "targets = ";
  for (std::size_t i = 0; i < c.targets.size(); ++i) out << (i ? ", " : "") << c.targets[i] + 1;
  out << "\n\n[hyper]\n"
      << "gamma = " << format_double(c.hyper.gamma) << "\n"
      << "phi = " << format_double(c.hyper.phi) << "\n"
      << "a = " << (c.hyper.a ? format_double(*c.hyper.a) : std::string("auto")) << "\n"
      << "b = " << format_double(c.hyper.b) << "\n"
      << "alpha0 = " << format_double(c.hyper.alpha0) << "\n"
      << "truncation = " << c.hyper.truncation << "\n"
      << "cell_cap = " << c.hyper.cell_cap << "\n";
  const auto& ts = c.two_step;
  out << "\n[mixture]\n"
      << "components = " << ts.mixture.components << "\n"
      << "burnin = " << ts.mixture.burnin << "\n"
      << "iters = " << ts.mixture.iters << "\n"
      << "min_weight = " << format_double(ts.min_weight) << "\n"
      << "merge_tol = " << format_double(ts.merge_tol) << "\n";
  out << "\n[lags]\n"
      << "burnin = " << ts.lags.burnin << "\n"
      << "iters = " << ts.lags.iters << "\n";
  out << "\n[chain]\n"
      << "burnin = " << ts.chain.burnin << "\n"
      << "iters = " << ts.chain.iters << "\n"
      << "thin = " << ts.chain.thin << "\n"
      << "recompute_every = " << ts.chain.recompute_every << "\n";
  out << "\n[par]\n"
      << "q_max = " << c.par_q_max << "\n"
      << "criteria = ";
  for (std::size_t i = 0; i < c.criteria.size(); ++i) out << (i ? ", " : "") << criterion_name(c.criteria[i]);
  out << "\ncross = " << (c.par_cross ? "true" : "false") << "\n"
      << "burnin = " << c.par_chain.burnin << "\n"
      << "iters = " << c.par_chain.iters << "\n"
      << "intercept_precision = " << format_double(c.par_chain.intercept_precision) << "\n"
      << "slope_precision = " << format_double(c.par_chain.slope_precision) << "\n"
      << "target_acceptance = " << format_double(c.par_chain.target_acceptance) << "\n";
}

} // namespace btfcli
