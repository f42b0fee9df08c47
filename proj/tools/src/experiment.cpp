#include "btfcli/experiment.hpp"

#include "btf/csv.hpp"
#include "btf/error.hpp"
#include "btf/two_step.hpp"

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace btfcli {

namespace {

std::vector<ReplicateRecord> run_replicate(const ExperimentConfig& c, std::size_t r,
                                           const FitInspector& inspect) {
  const btf::Rng base = btf::Rng(c.seed).fork(r);
  const auto data = replicate_data(c.scenario, c.seed, r);
  const auto split = btf::make_split(data.length(), c.pre_training, c.training, c.max_lag);
  const std::size_t train_end = split.test_begin();
  std::vector<ReplicateRecord> out;

  const btf::Rng par_rng = base.fork(3);
  for (std::size_t target : c.targets) {
    std::map<std::size_t, std::pair<double, std::size_t>> by_order;
    for (auto criterion : c.criteria) {
      const auto sel = btf::select_order(data, target, c.par_cross, 0, train_end,
                                         c.effective_q_max(), criterion);
      auto it = by_order.find(sel.order);
      if (it == by_order.end()) {
        const auto structure = btf::par_structure(data, target, sel.order, c.par_cross);
        const auto design = btf::build_par_design(data, structure, structure.min_history(), train_end);
        btf::Rng rng = par_rng.fork(target);
        const auto chain = btf::mh_chain(design, c.par_chain, rng);
        const auto ev = btf::score_par(chain, data, train_end);
        it = by_order.emplace(sel.order, std::make_pair(ev.score.score, ev.score.floored)).first;
      }
      out.push_back({r, target, "PAR-" + std::string(criterion == btf::Criterion::AIC ? "AIC" : "BIC"),
                     sel.order, it->second.first, it->second.second});
    }
  }

  const auto labelling = btf::fit_labelling(data, split, c.two_step, base.fork(1));
  const btf::Rng btf_rng = base.fork(2);
  for (std::size_t target : c.targets) {
    const auto fit = btf::fit_target(data, labelling.rules, target, split, c.hyper, c.two_step, btf_rng);
    if (inspect) inspect(r, fit);
    const auto ev = btf::score_btf(fit.draws, labelling.rules, data, target, split);
    out.push_back({r, target, "BTF", 0, ev.score.score, ev.score.floored});
  }
  return out;
}

} // namespace

btf::CountSeries replicate_data(const btf::ScenarioSpec& spec, std::uint64_t seed,
                                std::size_t replicate) {
  btf::Rng rng = btf::Rng(seed).fork(replicate).fork(0);
  return btf::generate(spec, rng);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs,
                                const FitInspector& inspect) {
  config.validate();
  std::vector<std::vector<ReplicateRecord>> per(config.replicates);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r; (r = next.fetch_add(1)) < config.replicates;) {
      try {
        per[r] = run_replicate(config, r, inspect);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.replicates;
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, config.replicates));
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < jobs; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto criterion : config.criteria) {
    result.table.models.push_back(criterion == btf::Criterion::AIC ? "PAR-AIC" : "PAR-BIC");
  }
  result.table.models.push_back("BTF");
  const std::size_t test_len = config.scenario.length - config.pre_training - config.training;
  for (std::size_t target : config.targets) {
    btf::ComparisonRow row;
    row.label = config.scenario.name + " " + std::to_string(config.pre_training + config.training) +
                ":" + std::to_string(test_len);
    if (config.targets.size() > 1 || config.scenario.design == btf::DesignKind::MultiNonlinear) {
      row.label += " y" + std::to_string(target + 1);
    }
    row.scores.resize(result.table.models.size());
    for (const auto& records : per) {
      for (const auto& rec : records) {
        if (rec.target != target) continue;
        for (std::size_t m = 0; m < result.table.models.size(); ++m) {
          if (result.table.models[m] == rec.model) row.scores[m].push_back(rec.score);
        }
      }
    }
    result.table.rows.push_back(std::move(row));
  }
  for (auto& records : per) {
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  return result;
}

void write_records_csv(std::ostream& out, const std::vector<ReplicateRecord>& records) {
  out << "replicate,target,model,order,score,floored\n";
  for (const auto& r : records) {
    out << r.replicate << ',' << r.target + 1 << ',' << r.model << ',' << r.order << ','
        << btf::format_double(r.score) << ',' << r.floored << '\n';
  }
}

} // namespace btfcli
