#include "btfcli/commands.hpp"

#include "btfcli/config.hpp"
#include "btfcli/draws_io.hpp"
#include "btfcli/experiment.hpp"
#include "btfcli/manifest.hpp"

#include "btf/csv.hpp"
#include "btf/error.hpp"
#include "btf/evaluation.hpp"
#include "btf/two_step.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace btfcli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw btf::SchemaError("cannot write " + path.string());
  return out;
}

struct HyperFlags {
  btf::Hyperparams h;
  std::optional<double> a;

  void add(CLI::App& app) {
    app.add_option("--gamma", h.gamma, "Dirichlet concentration of the kernels")->capture_default_str();
    app.add_option("--phi", h.phi, "lag penalty rate")->capture_default_str();
    app.add_option("--a", a, "Gamma shape of atom rates (default: half the training range)");
    app.add_option("--b", h.b, "Gamma rate of atom rates")->capture_default_str();
    app.add_option("--alpha0", h.alpha0, "stick-breaking concentration")->capture_default_str();
    app.add_option("--truncation", h.truncation, "number of atoms L")->capture_default_str();
    app.add_option("--cell-cap", h.cell_cap, "largest admissible cell space")->capture_default_str();
  }
  btf::Hyperparams get() const {
    auto out = h;
    out.a = a;
    try {
      out.validate();
    } catch (const std::invalid_argument& e) {
      throw btf::ConfigError(e.what());
    }
    return out;
  }
};

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string spec;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  std::size_t replicate = 0;
  std::string out;
  std::string manifest;
};

void cmd_simulate(const SimulateArgs& a, const std::string& command, std::ostream& log) {
  btf::ScenarioSpec spec;
  if (!a.spec.empty()) {
    std::ifstream in(a.spec);
    if (!in) throw btf::ConfigError("cannot read " + a.spec);
    spec = parse_scenario(in);
  } else {
    spec = btf::scenario_preset(a.scenario);
  }
  if (a.length) spec.length = a.length;
  spec.validate();
  const auto data = replicate_data(spec, a.seed, a.replicate);
  btf::write_count_csv(fs::path(a.out), data);
  if (!a.manifest.empty()) {
    auto m = manifest_header("simulate", command, a.seed);
    m["scenario"] = spec.name;
    m["replicate"] = a.replicate;
    std::ostringstream cfg;
    ExperimentConfig c;
    c.scenario = spec;
    write_config(cfg, c);
    m["spec"] = cfg.str().substr(0, cfg.str().find("\n[split]"));
    m["outputs"] = Json{{"data", input_record(a.out)}};
    save_json(a.manifest, m);
  }
  log << "wrote " << data.num_series() << " x " << data.length() << " counts to " << a.out << '\n';
}

// ---- fit-mixture ----------------------------------------------------------

struct MixtureArgs {
  std::string data;
  std::size_t pre_training = 0, training = 0, max_lag = 10;
  btf::TwoStepOptions opts;
  std::uint64_t seed = 1;
  std::string out, trace_dir;
};

void cmd_fit_mixture(const MixtureArgs& a, const std::string& command, std::ostream& log) {
  const auto data = btf::read_count_csv(fs::path(a.data));
  const auto split = btf::make_split(data.length(), a.pre_training, a.training, a.max_lag);
  auto opts = a.opts;
  opts.mixture.keep_trace = !a.trace_dir.empty();
  const auto lab = btf::fit_labelling(data, split, opts, btf::Rng(a.seed));

  auto m = manifest_header("mixture", command, a.seed);
  m["inputs"] = Json{{"data", input_record(a.data)}};
  m["split"] = to_json(split);
  m["options"] = Json{{"components", a.opts.mixture.components},
                      {"burnin", a.opts.mixture.burnin},
                      {"iters", a.opts.mixture.iters},
                      {"min_weight", a.opts.min_weight},
                      {"merge_tol", a.opts.merge_tol}};
  Json series = Json::array();
  for (std::size_t s = 0; s < data.num_series(); ++s) {
    series.push_back(Json{{"name", data.names()[s]},
                          {"raw", Json{{"weights", lab.raw[s].weights}, {"rates", lab.raw[s].rates}}},
                          {"weights", lab.selected[s].weights},
                          {"rates", lab.selected[s].rates},
                          {"warnings", lab.raw[s].warnings}});
    for (const auto& w : lab.raw[s].warnings) log << "warning: " << data.names()[s] << ": " << w << '\n';
    log << data.names()[s] << ": " << lab.selected[s].components() << " components\n";
  }
  m["series"] = series;
  save_json(a.out, m);
  if (!a.trace_dir.empty()) {
    // One file per series, named after the series.
    for (std::size_t s = 0; s < data.num_series(); ++s) {
      auto out = open_out(fs::path(a.trace_dir) / (data.names()[s] + ".csv"));
      btf::write_mixture_trace_csv(out, lab.raw[s]);
    }
  }
}

std::vector<btf::LabelRule> rules_from(const Json& series) {
  std::vector<btf::LabelRule> rules;
  for (const auto& s : series) {
    rules.emplace_back(require(s, "rates").get<std::vector<double>>());
  }
  return rules;
}

// ---- select-lags ----------------------------------------------------------

struct LagArgs {
  std::string data, mixture;
  std::size_t target = 1;
  btf::LagSelectionOptions opts;
  HyperFlags hyper;
  std::uint64_t seed = 1;
  std::string out, inclusion, ktrace;
};

void cmd_select_lags(const LagArgs& a, const std::string& command, std::ostream& log) {
  const auto mix = load_manifest(a.mixture, "mixture");
  verify_input(require(require(mix, "inputs"), "data"), a.data);
  const auto data = btf::read_count_csv(fs::path(a.data));
  const auto split = split_from_json(require(mix, "split"));
  if (split.total() != data.length()) throw btf::SchemaError("split does not match data length");
  const auto rules = rules_from(require(mix, "series"));
  if (rules.size() != data.num_series()) throw btf::SchemaError("mixture manifest series count mismatch");
  if (a.target < 1 || a.target > data.num_series()) throw btf::ConfigError("target out of range");
  const std::size_t target = a.target - 1;

  const auto design = btf::training_design(data, rules, target, split);
  const auto hyper = a.hyper.get().resolved(design.responses());
  btf::Rng rng = btf::Rng(a.seed).fork(2 * target);
  const auto res = btf::sample_K(design, hyper, a.opts, rng);

  auto m = manifest_header("lags", command, a.seed);
  m["inputs"] = Json{{"data", input_record(a.data)}, {"mixture", input_record(a.mixture)}};
  m["split"] = to_json(split);
  m["target"] = a.target;
  m["hyper"] = to_json(hyper);
  m["options"] = Json{{"burnin", a.opts.burnin}, {"iters", a.opts.iters}};
  m["rules"] = require(mix, "series");
  m["predictors"] = to_json(design.predictor_info());
  m["partition"] = to_json(res.mode);
  m["inclusion"] = res.inclusion;
  m["moves"] = Json{{"split_proposed", res.trace.split_proposed},
                    {"split_accepted", res.trace.split_accepted},
                    {"merge_proposed", res.trace.merge_proposed},
                    {"merge_accepted", res.trace.merge_accepted},
                    {"cap_rejections", res.trace.cap_rejections}};
  save_json(a.out, m);
  if (!a.inclusion.empty()) {
    auto out = open_out(a.inclusion);
    btf::write_inclusion_csv(out, design, res.inclusion, data.names());
  }
  if (!a.ktrace.empty()) {
    auto out = open_out(a.ktrace);
    btf::write_ktrace_csv(out, design, res.trace, data.names());
  }
  log << "modal K:";
  for (int k : res.mode.k) log << ' ' << k;
  log << '\n';
}

// ---- fit-btf --------------------------------------------------------------

struct BtfArgs {
  std::string data, lags;
  btf::ChainOptions opts;
  std::uint64_t seed = 1;
  std::string out, draws_dir;
};

void cmd_fit_btf(const BtfArgs& a, const std::string& command, std::ostream& log) {
  const auto lag = load_manifest(a.lags, "lags");
  verify_input(require(require(lag, "inputs"), "data"), a.data);
  const auto data = btf::read_count_csv(fs::path(a.data));
  const auto split = split_from_json(require(lag, "split"));
  if (split.total() != data.length()) throw btf::SchemaError("split does not match data length");
  const auto rules = rules_from(require(lag, "rules"));
  const auto target = require(lag, "target").get<std::size_t>();
  if (target < 1 || target > data.num_series() || rules.size() != data.num_series()) {
    throw btf::SchemaError("lags manifest does not match the data");
  }
  const auto hyper = hyper_from_json(require(lag, "hyper"));
  const auto partition = partition_from_json(require(lag, "partition"));
  const auto design = btf::training_design(data, rules, target - 1, split);
  if (partition.predictors() != design.predictors()) {
    throw btf::SchemaError("partition does not match the design");
  }

  btf::Rng rng = btf::Rng(a.seed).fork(2 * (target - 1) + 1);
  const auto draws = btf::run_chain(design, partition, hyper, a.opts, rng);
  std::size_t violations = 0;
  for (const auto& d : draws) violations += btf::check_draw(d).empty() ? 0 : 1;
  if (violations) throw btf::NumericError(std::to_string(violations) + " draws failed structural checks");

  write_btf_draws(a.draws_dir, draws);
  auto m = manifest_header("btf", command, a.seed);
  m["inputs"] = Json{{"data", input_record(a.data)}, {"lags", input_record(a.lags)}};
  m["split"] = to_json(split);
  m["target"] = target;
  m["hyper"] = to_json(hyper);
  m["options"] = Json{{"burnin", a.opts.burnin}, {"iters", a.opts.iters}, {"thin", a.opts.thin},
                      {"recompute_every", a.opts.recompute_every}};
  m["rules"] = require(lag, "rules");
  m["predictors"] = to_json(design.predictor_info());
  m["partition"] = to_json(partition);
  m["draws"] = Json{{"count", draws.size()},
                    {"dir", a.draws_dir},
                    {"atoms", input_record(fs::path(a.draws_dir) / "atoms.csv")},
                    {"cells", input_record(fs::path(a.draws_dir) / "cells.csv")},
                    {"pi", input_record(fs::path(a.draws_dir) / "pi.csv")}};
  save_json(a.out, m);
  log << "kept " << draws.size() << " draws in " << a.draws_dir << '\n';
}

// ---- fit-par --------------------------------------------------------------

struct ParArgs {
  std::string data;
  std::size_t pre_training = 0, training = 0;
  std::size_t q_max = 0;
  std::string criterion = "bic";
  std::size_t target = 1;
  bool cross = false;
  btf::ParChainOptions opts;
  std::uint64_t seed = 1;
  std::string out, draws, coefficients;
};

void cmd_fit_par(const ParArgs& a, const std::string& command, std::ostream& log) {
  const auto data = btf::read_count_csv(fs::path(a.data));
  const std::size_t train_end = a.pre_training + a.training;
  if (train_end > data.length() || train_end == 0) throw btf::SchemaError("training window exceeds the data");
  if (a.q_max < 1) throw btf::ConfigError("--q-max must be >= 1");
  if (a.target < 1 || a.target > data.num_series()) throw btf::ConfigError("target out of range");
  const std::size_t target = a.target - 1;
  const auto criterion = parse_criterion(a.criterion);
  if (a.q_max + 1 >= train_end) throw btf::SchemaError("training window shorter than q_max");

  const auto sel = btf::select_order(data, target, a.cross, 0, train_end, a.q_max, criterion);
  const auto structure = btf::par_structure(data, target, sel.order, a.cross);
  const auto design = btf::build_par_design(data, structure, structure.min_history(), train_end);
  if (btf::fit_mle(design).diverged) throw btf::NumericError("PAR maximum likelihood diverged (|beta| > 50)");
  btf::Rng rng = btf::Rng(a.seed).fork(target);
  const auto chain = btf::mh_chain(design, a.opts, rng);
  for (const auto& w : chain.warnings) log << "warning: " << w << '\n';

  const auto names = structure.coefficient_names(data.names());
  write_par_draws(a.draws, chain, names);
  if (!a.coefficients.empty()) {
    auto out = open_out(a.coefficients);
    btf::write_coefficient_csv(out, chain, data.names());
  }
  auto m = manifest_header("par", command, a.seed);
  m["inputs"] = Json{{"data", input_record(a.data)}};
  m["train_end"] = train_end;
  m["target"] = a.target;
  m["criterion"] = criterion_name(criterion);
  m["q_max"] = a.q_max;
  m["criterion_scores"] = sel.scores;
  m["order"] = sel.order;
  m["cross_series"] = structure.cross_series;
  m["coefficients"] = names;
  m["options"] = Json{{"burnin", a.opts.burnin},
                      {"iters", a.opts.iters},
                      {"intercept_precision", a.opts.intercept_precision},
                      {"slope_precision", a.opts.slope_precision},
                      {"target_acceptance", a.opts.target_acceptance}};
  m["acceptance_rate"] = chain.acceptance_rate;
  m["warnings"] = chain.warnings;
  m["draws"] = Json{{"count", chain.draws.size()}, {"file", input_record(a.draws)}};
  save_json(a.out, m);
  log << "PAR(" << sel.order << ") acceptance " << chain.acceptance_rate << '\n';
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string data, model, trace, out;
  double level = 0.95;
};

void cmd_score(const ScoreArgs& a, const std::string& command, std::ostream& log) {
  auto model = load_manifest(a.model, "");
  const auto kind = require(model, "kind").get<std::string>();
  verify_input(require(require(model, "inputs"), "data"), a.data);
  const auto data = btf::read_count_csv(fs::path(a.data));
  const bool with_trace = !a.trace.empty();
  btf::Evaluation ev;
  if (kind == "btf") {
    const auto split = split_from_json(require(model, "split"));
    if (split.total() != data.length()) throw btf::SchemaError("split does not match data length");
    if (split.test_len == 0) throw btf::SchemaError("split has no test points");
    const auto rules = rules_from(require(model, "rules"));
    const auto partition = partition_from_json(require(model, "partition"));
    std::vector<int> levels;
    for (const auto& p : require(model, "predictors")) levels.push_back(require(p, "levels").get<int>());
    const auto& dr = require(model, "draws");
    const fs::path dir = require(dr, "dir").get<std::string>();
    for (const char* f : {"atoms", "cells", "pi"}) verify_input(require(dr, f), dir / (std::string(f) + ".csv"));
    const auto draws = read_btf_draws(dir, partition.k, levels);
    const auto target = require(model, "target").get<std::size_t>() - 1;
    ev = btf::score_btf(draws, rules, data, target, split, with_trace, a.level);
  } else if (kind == "par") {
    btf::ParChainResult chain;
    chain.structure.target = require(model, "target").get<std::size_t>() - 1;
    chain.structure.order = require(model, "order").get<std::size_t>();
    chain.structure.cross_series = require(model, "cross_series").get<std::vector<std::size_t>>();
    const auto& dr = require(model, "draws");
    const fs::path file = require(require(dr, "file"), "path").get<std::string>();
    verify_input(require(dr, "file"), file);
    chain.draws = read_par_draws(file, chain.structure.parameters());
    const auto train_end = require(model, "train_end").get<std::size_t>();
    if (train_end >= data.length()) throw btf::SchemaError("no test points after the training window");
    ev = btf::score_par(chain, data, train_end, with_trace, a.level);
  } else {
    throw btf::SchemaError("cannot score a '" + kind + "' manifest");
  }
  if (with_trace) {
    auto out = open_out(a.trace);
    btf::write_trace_csv(out, ev.trace);
  }
  auto m = manifest_header("score", command, 0);
  m["inputs"] = Json{{"data", input_record(a.data)}, {"model", input_record(a.model)}};
  m["model_kind"] = kind;
  m["score"] = ev.score.score;
  m["points"] = ev.score.points;
  m["draws"] = ev.score.draws;
  m["floored"] = ev.score.floored;
  if (!a.out.empty()) save_json(a.out, m);
  if (ev.score.floored) log << "warning: " << ev.score.floored << " probabilities raised to 1e-300\n";
  log << kind << " log predictive score " << btf::format_double(ev.score.score) << '\n';
}

// ---- experiment -----------------------------------------------------------

struct ExperimentArgs {
  std::string config, out_dir;
  std::size_t jobs = 1;
};

void cmd_experiment(const ExperimentArgs& a, const std::string& command, std::ostream& log) {
  const auto config = load_config(a.config);
  const auto result = run_experiment(config, a.jobs);
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "comparison.csv");
    btf::write_comparison_csv(out, result.table);
  }
  {
    auto out = open_out(dir / "comparison.txt");
    btf::write_comparison_text(out, result.table);
  }
  {
    auto out = open_out(dir / "replicates.csv");
    write_records_csv(out, result.records);
  }
  std::ostringstream resolved;
  write_config(resolved, config);
  {
    auto out = open_out(dir / "config.ini");
    out << resolved.str();
  }
  auto m = manifest_header("experiment", command, config.seed);
  m["inputs"] = Json{{"config", input_record(a.config)}};
  m["replicates"] = config.replicates;
  m["outputs"] = Json{{"comparison_csv", input_record(dir / "comparison.csv")},
                      {"comparison_txt", input_record(dir / "comparison.txt")},
                      {"replicates_csv", input_record(dir / "replicates.csv")},
                      {"config", input_record(dir / "config.ini")}};
  save_json(dir / "manifest.json", m);
  btf::write_comparison_text(log, result.table);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian tensor factorisation for count time series"};
  app.require_subcommand(1);
  const std::string command = joined(args);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a scenario dataset");
  auto* scen = simulate->add_option("--scenario", sim.scenario, "preset name, e.g. table2-F");
  auto* spec = simulate->add_option("--spec", sim.spec, "INI file with a [scenario] section");
  scen->excludes(spec);
  simulate->add_option("--length", sim.length, "override the series length");
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--replicate", sim.replicate, "replicate index within an experiment")->capture_default_str();
  simulate->add_option("--out", sim.out, "output CSV")->required();
  simulate->add_option("--manifest", sim.manifest, "optional JSON manifest");

  MixtureArgs mix;
  auto* fit_mixture = app.add_subcommand("fit-mixture", "pre-training Poisson mixtures and label rules");
  fit_mixture->add_option("--data", mix.data)->required();
  fit_mixture->add_option("--pre-training", mix.pre_training, "T1")->required();
  fit_mixture->add_option("--training", mix.training, "T2")->required();
  fit_mixture->add_option("--max-lag", mix.max_lag, "q")->capture_default_str();
  fit_mixture->add_option("--components", mix.opts.mixture.components)->capture_default_str();
  fit_mixture->add_option("--burnin", mix.opts.mixture.burnin)->capture_default_str();
  fit_mixture->add_option("--iters", mix.opts.mixture.iters)->capture_default_str();
  fit_mixture->add_option("--min-weight", mix.opts.min_weight)->capture_default_str();
  fit_mixture->add_option("--merge-tol", mix.opts.merge_tol)->capture_default_str();
  fit_mixture->add_option("--seed", mix.seed)->capture_default_str();
  fit_mixture->add_option("--out", mix.out, "mixture manifest")->required();
  fit_mixture->add_option("--trace-dir", mix.trace_dir, "per-series CSVs of the retained sweeps");

  LagArgs lag;
  auto* select_lags = app.add_subcommand("select-lags", "sample K and the level partitions");
  select_lags->add_option("--data", lag.data)->required();
  select_lags->add_option("--mixture", lag.mixture, "mixture manifest")->required();
  select_lags->add_option("--target", lag.target, "1-based target series")->capture_default_str();
  select_lags->add_option("--burnin", lag.opts.burnin)->capture_default_str();
  select_lags->add_option("--iters", lag.opts.iters)->capture_default_str();
  lag.hyper.add(*select_lags);
  select_lags->add_option("--seed", lag.seed)->capture_default_str();
  select_lags->add_option("--out", lag.out, "lags manifest")->required();
  select_lags->add_option("--inclusion", lag.inclusion, "inclusion proportions CSV");
  select_lags->add_option("--ktrace", lag.ktrace, "cluster counts per retained iteration");

  BtfArgs btfa;
  auto* fit_btf = app.add_subcommand("fit-btf", "Gibbs sampler for the selected K");
  fit_btf->add_option("--data", btfa.data)->required();
  fit_btf->add_option("--lags", btfa.lags, "lags manifest")->required();
  fit_btf->add_option("--burnin", btfa.opts.burnin)->capture_default_str();
  fit_btf->add_option("--iters", btfa.opts.iters)->capture_default_str();
  fit_btf->add_option("--thin", btfa.opts.thin)->capture_default_str()->check(CLI::PositiveNumber);
  fit_btf->add_option("--seed", btfa.seed)->capture_default_str();
  fit_btf->add_option("--out", btfa.out, "model manifest")->required();
  fit_btf->add_option("--draws-dir", btfa.draws_dir, "directory for the draw CSVs")->required();

  ParArgs par;
  auto* fit_par = app.add_subcommand("fit-par", "Poisson autoregression baseline");
  fit_par->add_option("--data", par.data)->required();
  fit_par->add_option("--pre-training", par.pre_training, "T1")->required();
  fit_par->add_option("--training", par.training, "T2; the model is fitted to the first T1 + T2 points")->required();
  fit_par->add_option("--q-max", par.q_max, "largest candidate order")->required();
  fit_par->add_option("--criterion", par.criterion, "aic or bic")->capture_default_str();
  fit_par->add_option("--target", par.target, "1-based target series")->capture_default_str();
  fit_par->add_flag("--cross", par.cross, "add lag-1 cross terms of the other series");
  fit_par->add_option("--burnin", par.opts.burnin)->capture_default_str();
  fit_par->add_option("--iters", par.opts.iters)->capture_default_str();
  fit_par->add_option("--seed", par.seed)->capture_default_str();
  fit_par->add_option("--out", par.out, "model manifest")->required();
  fit_par->add_option("--draws", par.draws, "coefficient draws CSV")->required();
  fit_par->add_option("--coefficients", par.coefficients, "posterior summary CSV");

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "log predictive score on the test segment");
  score->add_option("--data", sc.data)->required();
  score->add_option("--model", sc.model, "btf or par model manifest")->required();
  score->add_option("--trace", sc.trace, "predictive trace CSV");
  score->add_option("--level", sc.level, "credible level of the trace interval")->capture_default_str();
  score->add_option("--out", sc.out, "score manifest");

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "run a whole table row");
  experiment->add_option("--config", ex.config, "experiment INI file")->required();
  experiment->add_option("--out-dir", ex.out_dir)->required();
  experiment->add_option("--jobs", ex.jobs, "concurrent replicates")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back(); // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (*simulate) cmd_simulate(sim, command, out);
    else if (*fit_mixture) cmd_fit_mixture(mix, command, out);
    else if (*select_lags) cmd_select_lags(lag, command, out);
    else if (*fit_btf) cmd_fit_btf(btfa, command, out);
    else if (*fit_par) cmd_fit_par(par, command, out);
    else if (*score) cmd_score(sc, command, out);
    else if (*experiment) cmd_experiment(ex, command, out);
    return kOk;
  } catch (const btf::SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const Json::exception& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const btf::NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const btf::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace btfcli
