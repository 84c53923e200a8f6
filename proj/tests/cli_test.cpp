#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <affproj_cli/cli.hpp>

namespace affproj::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Value following "key: " on its own line.
std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("affproj_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  void TearDown() override {
    std::filesystem::remove_all(dir);
    unsetenv("AFFPROJ_SEED");
  }
  std::filesystem::path dir;
};

TEST(Cli, Experiment2Alg2CollapsesInOneIteration) {
  const auto r = invoke({"run", "--experiment", "2", "--alg", "alg2", "--q", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "converged"), "yes (residual-met)");
  EXPECT_EQ(field(r.out, "iterations"), "1");
  const double before = std::stod(field(r.out, "pencil residual (initial)"));
  const double after = std::stod(field(r.out, "pencil residual (final)"));
  EXPECT_LE(after, 1e-10 * before);
}

TEST_F(CliFiles, Experiment1MapTraceIsLinear) {
  const auto path = (dir / "trace.csv").string();
  const auto r = invoke({"run", "--experiment", "1", "--alg", "map", "--output", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(path));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "iter,phase,set_index,step_norm,residual_max,residual_0,residual_1,dist_oracle");
  std::size_t rows = 0, v_rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.find(",set-projection,1,") != std::string::npos) ++v_rows;
  }
  EXPECT_EQ(rows, 1 + std::stoul(field(r.out, "iterations")));
  EXPECT_EQ(std::to_string(v_rows), field(r.out, "hard projections"));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
}

TEST(Cli, RandomFamilyMatchesOracle) {
  const auto r = invoke(
      {"run", "--random", "dim=20,k=3,seed=7", "--alg", "alg1", "--q", "4", "--oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(std::stod(field(r.out, "distance to oracle")), 1e-6);
}

TEST(Cli, BenchSingleConfigMatchesRun) {
  RunConfig config;
  config.experiment = 1;
  config.alg = Algorithm::alg1;
  config.q = 3;
  const auto problem = build_problem(config);
  const auto result = solve(problem, config, std::nullopt);
  const auto counts = projections_to_thresholds(result, bench_thresholds());

  const auto b = invoke({"bench", "--experiment", "1", "--configs", "alg1:3"});
  ASSERT_EQ(b.code, 0) << b.err;
  std::istringstream csv(b.out);
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  std::string expected = "alg1:3,alg1,last-q(3),3";
  for (const auto& c : counts) {
    ASSERT_TRUE(c.has_value());
    expected += "," + std::to_string(*c);
  }
  EXPECT_EQ(row.rfind(expected + ",", 0), 0u) << row;
  EXPECT_FALSE(std::getline(csv, row));
}

TEST(Cli, DefaultBenchSweepOrdering) {
  const auto b = invoke({"bench", "--experiment", "1"});
  ASSERT_EQ(b.code, 0) << b.err;
  std::istringstream csv(b.out);
  std::string line;
  std::getline(csv, line);
  std::map<std::string, int> at_1e8;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    ASSERT_GE(cells.size(), 9u);
    at_1e8[cells[0]] = std::stoi(cells[7]);
  }
  EXPECT_EQ(at_1e8.size(), 13u);
  for (int q = 2; q <= 5; ++q) {
    const auto a1 = at_1e8.at("alg1:" + std::to_string(q));
    const auto a2 = at_1e8.at("alg2:" + std::to_string(q));
    EXPECT_LT(a1, at_1e8.at("map"));
    EXPECT_LE(a2, a1);
  }
}

TEST_F(CliFiles, RepeatedRunsAreByteIdentical) {
  const auto a = (dir / "a.csv").string();
  const auto b = (dir / "b.csv").string();
  for (const auto& p : {a, b}) {
    ASSERT_EQ(invoke({"run", "--random", "dim=15,k=3,seed=5", "--alg", "alg2", "--q", "2",
                      "--oracle", "--output", p})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  const auto ba = invoke({"bench", "--random", "dim=15,k=3,seed=5", "--configs", "map,alg1:2"});
  const auto bb = invoke({"bench", "--random", "dim=15,k=3,seed=5", "--configs", "map,alg1:2"});
  EXPECT_EQ(ba.out, bb.out);
}

TEST_F(CliFiles, SeedEnvironmentOverridesConfig) {
  setenv("AFFPROJ_SEED", "99", 1);
  const auto r = invoke({"run", "--random", "dim=10,k=2,seed=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(field(r.out, "problem").find("seed=99"), std::string::npos);
  setenv("AFFPROJ_SEED", "x", 1);
  EXPECT_EQ(invoke({"run", "--random", "dim=10,k=2"}).code, 2);
}

TEST_F(CliFiles, JsonConfigWithFlagOverride) {
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"random": {"dim": 12, "k": 2, "seed": 3}, "alg": "alg1",
                          "policy": "all", "oracle": true, "max_iter": 2})";
  const auto r = invoke({"run", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "algorithm"), "alg1 policy all");
  EXPECT_EQ(field(r.out, "converged"), "no (max-iter)");
  const auto o = invoke({"run", "--config", cfg.string(), "--max-iter", "500", "--alg", "map"});
  EXPECT_EQ(field(o.out, "algorithm"), "map");
  EXPECT_EQ(field(o.out, "converged"), "yes (residual-met)");

  std::ofstream(dir / "bad.json") << R"({"alg": "alg1", "colour": 3})";
  EXPECT_EQ(invoke({"run", "--config", (dir / "bad.json").string()}).code, 2);
}

TEST_F(CliFiles, ProblemFileMatchesBuiltInExperiment2) {
  const auto ex = mmup::experiment2();
  std::ostringstream k;
  for (Eigen::Index i = 0; i < 30; ++i) {
    for (Eigen::Index j = 0; j < 30; ++j) k << (j ? "," : "") << ex.pencil.k(i, j);
    k << '\n';
  }
  std::ofstream(dir / "k.csv") << k.str();
  std::ostringstream eye4, y;
  for (int i = 0; i < 30; ++i) {
    eye4 << (i ? "," : "") << "[";
    for (int j = 0; j < 30; ++j) eye4 << (j ? "," : "") << (i == j ? 4 : 0);
    eye4 << "]";
    y << (i ? "," : "") << format_double(1.0 / std::sqrt(30.0));
  }
  std::ofstream(dir / "p.json") << R"({"M": [)" << eye4.str() << R"(], "D": [)" << eye4.str()
                                << R"(], "K": "k.csv", "targets": [{"mu_re": -0.018, "y_re": [)"
                                << y.str() << "]}]}";
  const auto from_file =
      invoke({"run", "--problem", (dir / "p.json").string(), "--alg", "alg1", "--q", "2"});
  const auto built_in = invoke({"run", "--experiment", "2", "--alg", "alg1", "--q", "2"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(field(from_file.out, "pencil residual (final)"),
            field(built_in.out, "pencil residual (final)"));
}

TEST(Cli, OracleAndVerify) {
  const auto o = invoke({"oracle", "--random", "dim=6,k=2,seed=2"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 6);
  EXPECT_NE(o.err.find("distance from x0"), std::string::npos);

  const auto v = invoke({"verify", "--random", "dim=12,k=3,seed=4", "--alg", "alg1", "--policy",
                         "all"});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_EQ(field(v.out, "verify"), "ok");
  EXPECT_EQ(field(v.out, "fejer").rfind("ok", 0), 0u);
}

TEST(Cli, ErrorsGiveNonzeroExit) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"run", "--experiment", "3"}).code, 2);
  EXPECT_EQ(invoke({"run", "--experiment", "1", "--random", "dim=4"}).code, 2);
  EXPECT_EQ(invoke({"run", "--experiment", "1", "--alg", "alg3"}).code, 2);
  EXPECT_EQ(invoke({"run", "--experiment", "1", "--alg", "alg1", "--q", "0"}).code, 2);
  EXPECT_EQ(invoke({"run", "--problem", "/nonexistent/p.json"}).code, 2);
  EXPECT_EQ(invoke({"run", "--random", "dim=5,k=3,codims=2:2:2"}).code, 2);
  EXPECT_EQ(invoke({"bench", "--experiment", "1", "--configs", "alg1:x"}).code, 2);
  EXPECT_EQ(invoke({"run", "--help"}).code, 0);
}

TEST(CliParsing, RandomSpecAndConfigs) {
  const auto spec = parse_random_spec("dim=30,k=4,codims=1:2:3:4,seed=11,linear=1");
  EXPECT_EQ(spec.dim, 30);
  EXPECT_EQ(spec.k, 4u);
  EXPECT_EQ(spec.codims, (std::vector<Eigen::Index>{1, 2, 3, 4}));
  EXPECT_EQ(spec.seed, 11u);
  EXPECT_TRUE(spec.linear);
  EXPECT_THROW(parse_random_spec("dim"), ConfigError);
  EXPECT_THROW(parse_random_spec("k=2,codims=1"), ConfigError);
  EXPECT_THROW(parse_random_spec("size=3"), ConfigError);

  const auto entries = parse_bench_configs("map,alg1:4,alg2,alg1:all");
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0].label(), "map");
  EXPECT_EQ(entries[1].label(), "alg1:4");
  EXPECT_EQ(entries[2].label(), "alg2:2");
  EXPECT_EQ(entries[3].label(), "alg1:all");
  EXPECT_EQ(default_bench_configs().size(), 13u);
}

}  // namespace
}  // namespace affproj::cli
