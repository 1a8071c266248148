#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sepx/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sepx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = sepx::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sepx_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("a.json", R"({"attrs":[1,3,2],"edges":[[0,1],[1,2]]})");
    write("b.json", R"({"attrs":[1,4,3,2],"edges":[[0,1],[1,3],[0,2],[2,3]]})");
    write("target.json", R"({"attrs":[1,3,4,2],"edges":[[0,1],[0,2],[1,3],[2,3]]})");
    write("bad.json", R"({"attrs":[1,2],"edges":[[0,"x"]]})");
    write("c.json", R"({"attrs":[1,4,2],"edges":[[0,1],[1,2],[0,2]]})");
    write("big.json", R"({"attrs":[1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1],"edges":[]})");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GedOfIdenticalGraphs) {
  const Result r = run({"ged", path("a.json"), path("a.json")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind(R"({"alignment":[0,1,2],"d_e":0,"d_v":0,"distance":0)", 0), 0u) << r.out;
}

TEST_F(CliTest, GedTextOutput) {
  const Result r = run({"ged", "--text", path("a.json"), path("b.json")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "distance 3 d_v 1 d_e 2\n");
}

TEST_F(CliTest, MalformedGraphNamesTheField) {
  const Result r = run({"ged", path("a.json"), path("bad.json")});
  EXPECT_EQ(r.status, sepx::cli::kInput);
  EXPECT_NE(r.err.find("edges[0]"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("bad.json"), std::string::npos) << r.err;
}

TEST_F(CliTest, CapacityError) {
  const Result r = run({"ged", path("big.json"), path("a.json")});
  EXPECT_EQ(r.status, sepx::cli::kCapacity);
  EXPECT_NE(r.err.find("capacity"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).status, sepx::cli::kUsage);
  EXPECT_EQ(run({}).status, sepx::cli::kUsage);
  EXPECT_EQ(run({"crossover", "--mode", "bogus", path("a.json"), path("b.json")}).status,
            sepx::cli::kUsage);
  EXPECT_EQ(run({"mutate", "--pm", "1.5", path("a.json")}).status, sepx::cli::kUsage);
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST_F(CliTest, InputErrorsFromValues) {
  EXPECT_EQ(run({"mutate", "--alphabet", "1,x", path("a.json")}).status, sepx::cli::kInput);
  EXPECT_EQ(run({"mutate", "--pm", "0", path("a.json")}).status, sepx::cli::kInput);
  EXPECT_EQ(run({"simulate-lbei", "--space", "custom", "--n", "3", "--nopt1", "9"}).status,
            sepx::cli::kInput);
}

TEST_F(CliTest, CrossoverAndMutateAreSeeded) {
  for (const std::string mode : {"sep", "sep-bernoulli", "std"}) {
    const Result a = run({"crossover", "--mode", mode, "--seed", "5", path("a.json"), path("b.json")});
    const Result b = run({"crossover", "--mode", mode, "--seed", "5", path("a.json"), path("b.json")});
    EXPECT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NO_THROW(sepx::parse_graph(a.out));
  }
  const Result m1 = run({"mutate", "--pm", "0.3", "--seed", "9", path("a.json")});
  const Result m2 = run({"mutate", "--pm", "0.3", "--seed", "9", path("a.json")});
  EXPECT_EQ(m1.status, 0);
  EXPECT_EQ(m1.out, m2.out);
}

TEST_F(CliTest, CrossoverWithValidity) {
  const Result r = run({"crossover", "--validity", "dag-io", "--seed", "3", path("a.json"),
                        path("c.json")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(sepx::is_dag_io(sepx::parse_graph(r.out), {}));
  // Every halfway point between a and b leaves a vertex off the input-output paths.
  const Result none = run({"crossover", "--validity", "dag-io", "--seed", "3", path("a.json"),
                           path("b.json")});
  EXPECT_EQ(none.status, sepx::cli::kFailure);
  EXPECT_NE(none.err.find("no valid offspring"), std::string::npos);
}

TEST_F(CliTest, SeedFromEnvironmentUnlessFlagGiven) {
  ::setenv(sepx::cli::kSeedEnv, "5", 1);
  const Result env = run({"crossover", path("a.json"), path("b.json")});
  ::unsetenv(sepx::cli::kSeedEnv);
  const Result flag = run({"crossover", "--seed", "5", path("a.json"), path("b.json")});
  EXPECT_EQ(env.out, flag.out);
  ::setenv(sepx::cli::kSeedEnv, "not-a-number", 1);
  EXPECT_EQ(run({"crossover", path("a.json"), path("b.json")}).status, sepx::cli::kInput);
  EXPECT_EQ(run({"crossover", "--seed", "5", path("a.json"), path("b.json")}).out, flag.out);
  ::unsetenv(sepx::cli::kSeedEnv);
}

TEST_F(CliTest, SimulateLbeiIsReproducible) {
  const std::vector<std::string> args{"simulate-lbei", "--space", "nas101", "--trials", "1000",
                                      "--seed", "7"};
  const Result a = run(args), b = run(args);
  EXPECT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind(sepx::kLbeiCsvHeader, 0), 0u);
  // 19 x 19 feasible cells plus the header.
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 362);

  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path("grid.csv"), "--threads", "3"});
  EXPECT_EQ(run(with_out).status, 0);
  EXPECT_EQ(slurp(dir_ / "grid.csv"), a.out);
}

TEST_F(CliTest, SearchWritesAllOutputs) {
  const std::vector<std::string> args{"search", "--target", path("target.json"), "--operator",
                                      "sep-x", "--pop", "10", "--tournament", "3", "--evals",
                                      "60", "--runs", "2", "--seed", "4", "--report-every", "20",
                                      "--out", path("out1")};
  const Result r = run(args);
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"runs.csv", "stats_d.csv", "stats_n1.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out1" / f)) << f;
  }
  const std::string runs = slurp(dir_ / "out1" / "runs.csv");
  EXPECT_EQ(runs.rfind("run_id,eval,best_fitness,operator\n", 0), 0u);
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 121);
  EXPECT_EQ(slurp(dir_ / "out1" / "stats_d.csv").rfind("d_opt_p1,d_p1_p2,count,frequency", 0), 0u);
  const auto summary = nlohmann::json::parse(slurp(dir_ / "out1" / "summary.json"));
  EXPECT_EQ(summary["runs"], 2);
  EXPECT_EQ(summary["hitting_times"].size(), 2u);
  EXPECT_EQ(summary["checkpoints"].size(), 3u);

  auto again = args;
  again.back() = path("out2");
  ASSERT_EQ(run(again).status, 0);
  for (const char* f : {"runs.csv", "stats_d.csv", "stats_n1.csv", "summary.json"}) {
    EXPECT_EQ(slurp(dir_ / "out1" / f), slurp(dir_ / "out2" / f)) << f;
  }
}
