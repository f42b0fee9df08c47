#include "btfcli/commands.hpp"
#include "btfcli/config.hpp"
#include "btfcli/draws_io.hpp"
#include "btfcli/experiment.hpp"

#include "btf/csv.hpp"
#include "btf/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace btfcli;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("btfcli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "btfcount");
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

} // namespace

TEST(Config, ShippedConfigsRoundTrip) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(BTF_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".ini") continue;
    ++seen;
    const auto c = load_config(entry.path());
    std::ostringstream text;
    write_config(text, c);
    std::istringstream back(text.str());
    EXPECT_EQ(parse_config(back), c) << entry.path();
  }
  EXPECT_EQ(seen, 18u);
}

TEST(Config, RoundTripsNonDefaultFields) {
  std::istringstream in(R"([scenario]
name = custom
design = multi_nonlinear
length = 800
series = 2
nu_minus = 15
nu_plus = 4.5
dependencies = 1:1, 2:3 | 1:2

[split]
pre_training = 300
training = 200
max_lag = 6

[experiment]
replicates = 2
seed = 99
targets = 2, 1

[hyper]
a = 3.25
gamma = 0.2

[par]
criteria = bic
cross = yes
slope_precision = 0.001
)");
  const auto c = parse_config(in);
  EXPECT_EQ(c.targets, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(c.scenario.dependencies[0][1].series, 1u);
  EXPECT_TRUE(c.par_cross);
  std::ostringstream text;
  write_config(text, c);
  std::istringstream back(text.str());
  EXPECT_EQ(parse_config(back), c);
}

TEST(Config, RejectsBadInput) {
  std::istringstream unknown("[nonsense]\nx = 1\n");
  EXPECT_THROW(parse_config(unknown), btf::ConfigError);
  std::istringstream bad_number("[scenario]\npreset = table1-A\n[split]\ntraining = ten\n");
  EXPECT_THROW(parse_config(bad_number), btf::ConfigError);
  std::istringstream no_test("[scenario]\npreset = table1-A\nlength = 4000\n");
  EXPECT_THROW(parse_config(no_test), btf::ConfigError);
}

TEST_F(CliTest, SimulateIsByteIdentical) {
  ASSERT_EQ(run({"simulate", "--scenario", "table2-F", "--seed", "5", "--out", path("a.csv"),
                 "--manifest", path("a.json")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"simulate", "--scenario", "table2-F", "--seed", "5", "--out", path("b.csv")}), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const auto data = btf::read_count_csv(fs::path(path("a.csv")));
  EXPECT_EQ(data.length(), 5000u);
  ASSERT_EQ(run({"simulate", "--scenario", "table2-F", "--seed", "5", "--replicate", "1", "--out",
                 path("c.csv")}),
            0);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliTest, ExitCodes) {
  {
    std::ofstream f(path("neg.csv"));
    f << "y\n1\n2\n-3\n4\n";
  }
  EXPECT_EQ(run({"fit-mixture", "--data", path("neg.csv"), "--pre-training", "2", "--training", "2",
                 "--max-lag", "1", "--out", path("m.json")}),
            kSchema);
  EXPECT_NE(err_.str().find("line 4"), std::string::npos) << err_.str();

  EXPECT_EQ(run({"simulate", "--scenario", "table9-Z", "--out", path("x.csv")}), kConfig);
  EXPECT_EQ(run({"fit-btf", "--data"}), kConfig);
  EXPECT_EQ(run({"bogus"}), kConfig);
  {
    std::ofstream f(path("bad.ini"));
    f << "[split]\nmax_lag = 0\n";
  }
  EXPECT_EQ(run({"experiment", "--config", path("bad.ini"), "--out-dir", path("ex")}), kConfig);

  {
    std::ofstream f(path("sep.csv"));
    f << "y\n";
    for (int i = 0; i < 40; ++i) f << (i % 2 ? 5 + i % 3 : 0) << '\n';
  }
  EXPECT_EQ(run({"fit-par", "--data", path("sep.csv"), "--pre-training", "20", "--training", "10",
                 "--q-max", "1", "--out", path("p.json"), "--draws", path("p.csv")}),
            kNumeric)
      << err_.str();

  std::ofstream(path("empty.json")) << "{\"format\": \"btfcount-manifest\"}";
  EXPECT_EQ(run({"score", "--data", path("sep.csv"), "--model", path("empty.json")}), kSchema);
}

TEST_F(CliTest, StagedPipelineIsDeterministic) {
  ASSERT_EQ(run({"simulate", "--scenario", "table2-A", "--length", "700", "--seed", "3", "--out",
                 path("d.csv")}),
            0);
  auto pipeline = [&](const std::string& tag) {
    const auto p = [&](const std::string& n) { return path(tag + "_" + n); };
    EXPECT_EQ(run({"fit-mixture", "--data", path("d.csv"), "--pre-training", "300", "--training",
                   "300", "--max-lag", "3", "--components", "4", "--burnin", "50", "--iters", "100",
                   "--out", p("mix.json"), "--trace-dir", p("mixtrace")}),
              0)
        << err_.str();
    EXPECT_EQ(run({"select-lags", "--data", path("d.csv"), "--mixture", p("mix.json"), "--burnin",
                   "50", "--iters", "100", "--out", p("lags.json"), "--inclusion", p("inc.csv"),
                   "--ktrace", p("k.csv")}),
              0)
        << err_.str();
    EXPECT_EQ(run({"fit-btf", "--data", path("d.csv"), "--lags", p("lags.json"), "--burnin", "20",
                   "--iters", "40", "--thin", "2", "--out", p("btf.json"), "--draws-dir",
                   p("draws")}),
              0)
        << err_.str();
    EXPECT_EQ(run({"score", "--data", path("d.csv"), "--model", p("btf.json"), "--trace",
                   p("trace.csv"), "--out", p("score.json")}),
              0)
        << err_.str();
    EXPECT_EQ(run({"fit-par", "--data", path("d.csv"), "--pre-training", "300", "--training", "300",
                   "--q-max", "3", "--burnin", "100", "--iters", "200", "--out", p("par.json"),
                   "--draws", p("par.csv"), "--coefficients", p("coef.csv")}),
              0)
        << err_.str();
    EXPECT_EQ(run({"score", "--data", path("d.csv"), "--model", p("par.json")}), 0) << err_.str();
  };
  pipeline("a");
  pipeline("b");
  for (const char* f : {"inc.csv", "k.csv", "draws/atoms.csv", "draws/cells.csv", "draws/pi.csv",
                        "trace.csv", "par.csv", "coef.csv", "mixtrace/y.csv"}) {
    EXPECT_EQ(slurp(path(std::string("a_") + f)), slurp(path(std::string("b_") + f))) << f;
    EXPECT_FALSE(slurp(path(std::string("a_") + f)).empty()) << f;
  }
  EXPECT_EQ(slurp(path("a_trace.csv")).substr(0, 17), "t,y,mean,lo95,hi9");
  EXPECT_EQ(slurp(path("a_k.csv")).substr(0, 18), "iter,series,lag,k\n");

  // A modified input is caught by the digest check.
  {
    std::ofstream f(path("d.csv"), std::ios::app);
    f << "1\n";
  }
  EXPECT_EQ(run({"score", "--data", path("d.csv"), "--model", path("a_btf.json")}), kSchema);
}

TEST_F(CliTest, DrawsRoundTripExactly) {
  btf::Rng rng(3);
  std::vector<btf::PosteriorDraw> draws;
  for (int i = 0; i < 3; ++i) {
    btf::PosteriorDraw d;
    d.k = {2, 1};
    d.levels = {3, 2};
    d.pistar = {rng.uniform(), 0.0};
    d.pistar[1] = 1.0 - d.pistar[0];
    d.lambdastar = {rng.uniform() * 50, 1e-7 * rng.uniform()};
    d.zstar = {1, 0};
    const double u = rng.uniform(), v = rng.uniform(), w = rng.uniform();
    d.pi = {{u, 1 - u, v, 1 - v, w, 1 - w}, {1.0, 1.0}};
    draws.push_back(d);
  }
  write_btf_draws(dir_ / "draws", draws);
  EXPECT_EQ(read_btf_draws(dir_ / "draws", {2, 1}, {3, 2}), draws);

  btf::ParChainResult chain;
  chain.draws = {{0.1, -1.0 / 3.0}, {2.0 / 7.0, 1e-300}};
  write_par_draws(dir_ / "par.csv", chain, {"beta_0", "beta_1"});
  EXPECT_EQ(read_par_draws(dir_ / "par.csv", 2), chain.draws);
}

TEST_F(CliTest, ExperimentIsIndependentOfJobs) {
  {
    std::ofstream f(path("small.ini"));
    f << "[scenario]\npreset = table2-A\nlength = 600\n"
         "[split]\npre_training = 300\ntraining = 200\nmax_lag = 3\n"
         "[experiment]\nreplicates = 2\nseed = 4\n"
         "[mixture]\ncomponents = 4\nburnin = 50\niters = 100\n"
         "[lags]\nburnin = 30\niters = 60\n"
         "[chain]\nburnin = 20\niters = 40\n"
         "[par]\nburnin = 100\niters = 200\n";
  }
  ASSERT_EQ(run({"experiment", "--config", path("small.ini"), "--out-dir", path("one")}), 0) << err_.str();
  ASSERT_EQ(run({"experiment", "--config", path("small.ini"), "--out-dir", path("two"), "--jobs", "2"}), 0);
  for (const char* f : {"comparison.csv", "comparison.txt", "replicates.csv", "config.ini"}) {
    EXPECT_EQ(slurp(path(std::string("one/") + f)), slurp(path(std::string("two/") + f))) << f;
  }
  EXPECT_TRUE(fs::exists(path("one/manifest.json")));
}
