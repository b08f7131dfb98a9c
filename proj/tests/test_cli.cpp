#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bridgelab/cli.hpp"

using namespace bridgelab;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bridgelab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Cli, TreesRooted) {
  const auto r = run({"trees", "--rooted", "--max-size", "6"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["tool"], "bridgelab");
  EXPECT_EQ(j["config"]["max_size"], 6);
  EXPECT_EQ(j["result"]["count"], 37);
  EXPECT_EQ(j["result"]["counts_by_size"], json({1, 1, 2, 4, 9, 20}));
}

TEST(Cli, TreesUnrootedCsv) {
  const auto r = run({"trees", "--unrooted", "--max-size", "5", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("code,size,aut\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 8);
}

TEST(Cli, ForestsCountAndProbabilities) {
  auto r = run({"forests", "--count", "--n", "5", "--k", "2"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.report()["result"]["count"], "110");
  r = run({"forests", "--conn-prob", "--n", "7"});
  EXPECT_EQ(r.report()["result"]["probability"], json({{"num", "16807"}, {"den", "36961"}}));
  r = run({"forests", "--conn-prob", "--logfloat", "--n", "2000"});
  const double p = r.report()["result"]["probability"];
  EXPECT_GT(p, 0.55);
  EXPECT_LT(p, 0.6066);
  r = run({"forests", "--ratio", "--n-range", "3:5", "--format", "csv"});
  EXPECT_EQ(r.out, "n,value\n3,1\n4,15/16\n5,22/25\n");
}

TEST(Cli, SmallExamples) {
  EXPECT_EQ(run({"trees", "--unrooted", "--max-size", "4"}).report()["result"]["count"], 5);
  EXPECT_EQ(run({"trees", "--max-size", "1"}).report()["result"]["count"], 1);
  EXPECT_EQ(run({"forests", "--count", "--n", "4", "--k", "2"}).report()["result"]["count"], "15");
  EXPECT_EQ(run({"forests", "--count", "--n", "5", "--k", "5"}).report()["result"]["count"], "1");
  EXPECT_EQ(run({"forests", "--conn-prob", "--n", "3", "--exact"}).report()["result"]["probability"],
            json({{"num", "3"}, {"den", "7"}}));
  const auto r = run({"verify", "--suite", "simple-counting", "--n", "3", "--class", "all-forests"});
  EXPECT_EQ(r.code, kExitOk);
  const auto ratios = r.report()["result"]["suites"][0]["result"]["ratios"];
  EXPECT_EQ(ratios[0], json({{"num", "1"}, {"den", "1"}}));
  EXPECT_EQ(ratios[1], json({{"num", "2"}, {"den", "3"}}));
}

TEST(Cli, CapacityErrorsExitOne) {
  const auto r = run({"forests", "--enumerate", "--n", "9"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ReportsAreByteIdenticalOnRerun) {
  const std::vector<std::string> args{"verify", "--suite", "all", "--n", "5", "--max-size", "6", "--samples", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> opt{"optimize", "--u-max", "2", "--k", "8", "--restarts", "3"};
  EXPECT_EQ(run(opt).out, run(opt).out);
  EXPECT_EQ(run(opt).report()["schema"], 1);
}

TEST(Cli, ForestsSampleIsReproducible) {
  const auto a = run({"forests", "--sample", "--n", "9", "--samples", "50", "--seed", "4"});
  const auto b = run({"forests", "--sample", "--n", "9", "--samples", "50", "--seed", "4"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifySuitesPass) {
  for (const char* suite : {"aut-identity", "cayley", "simple-counting", "local-double-counting", "sum-bound",
                            "supermultiplicativity", "boxing"}) {
    const auto r = run({"verify", "--suite", suite, "--n", "5", "--max-size", "6"});
    EXPECT_EQ(r.code, kExitOk) << suite << r.err;
    EXPECT_TRUE(r.report()["result"]["pass"].get<bool>()) << suite;
  }
  const auto r = run({"verify", "--suite", "dissymmetry", "--k", "7", "--samples", "3"});
  EXPECT_EQ(r.code, kExitOk);
}

TEST(Cli, VerifyRandomClassAndFile) {
  auto r = run({"verify", "--suite", "local-double-counting", "--class", "random", "--class-seed", "8", "--n", "6",
                "--w", "2", "--t-max", "3", "--u-max", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto path = std::filesystem::temp_directory_path() / "bridgelab_cli_class.json";
  {
    std::ofstream f(path);
    f << R"({"n": 3, "forests": [[[1, 2]]]})";
  }
  r = run({"verify", "--suite", "simple-counting", "--class-file", path.string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_FALSE(r.report()["result"]["suites"][0]["result"]["bridge_addable"].get<bool>());
  std::filesystem::remove(path);
}

TEST(Cli, OptimizeSingleVertex) {
  const auto r = run({"optimize", "--u-max", "1", "--k", "12", "--restarts", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.report();
  EXPECT_NEAR(j["result"]["objective"].get<double>(), 0.441214289807224, 1e-9);
  EXPECT_TRUE(j["result"]["bound_check"]["pass"].get<bool>());
}

TEST(Cli, OptimizeBoundFailureExitsOne) {
  const auto r = run({"optimize", "--u-max", "1", "--k", "6", "--epsilon", "0", "--restarts", "1"});
  EXPECT_EQ(r.code, kExitFailure);
}

TEST(Cli, OutputFileAndThreads) {
  const auto path = std::filesystem::temp_directory_path() / "bridgelab_cli_out.json";
  const auto r = run({"--threads", "2", "trees", "--max-size", "3", "--output", path.string()});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const auto j = json::parse(f);
  EXPECT_EQ(j["config"]["threads"], 2);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"trees", "--max-size", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"forests", "--count", "--n", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"forests", "--n", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"forests", "--count", "--ratio", "--n", "3", "--k", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"forests", "--conn-prob", "--n-range", "5:2"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--suite", "cayley", "--format", "csv"}).code, kExitUsage);
  EXPECT_EQ(run({"optimize", "--k", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "trees"}).code, kExitUsage);
}

TEST(Cli, HelpAndVersion) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("forests"), std::string::npos);
  r = run({"--version"});
  EXPECT_EQ(r.code, kExitOk);
}
