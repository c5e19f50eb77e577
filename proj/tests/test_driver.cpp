#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sizedmu/driver.hpp"

using namespace sizedmu;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The number after "# expect-exit:" on the first line.
int expected_exit(const std::string& src) {
  const std::string tag = "# expect-exit:";
  EXPECT_EQ(src.rfind(tag, 0), 0u);
  return std::stoi(src.substr(tag.size()));
}

std::vector<std::size_t> sizes(const nlohmann::json& entry) {
  std::vector<std::size_t> out;
  for (const auto& s : entry["stages"]) out.push_back(s["size"].get<std::size_t>());
  return out;
}

}  // namespace

TEST(Run, ConstantFunctorIsStationary) {
  RunResult r = run_source("set A = {x, y, z}\nF = A\nmu F\n");
  EXPECT_EQ(r.exit_code, 0);
  const auto& e = r.json["results"][0];
  EXPECT_EQ(e["status"], "stationary");
  EXPECT_EQ(e["stationaryAt"], "2");
  EXPECT_EQ(e["carrier"]["size"], 3);
  EXPECT_EQ(e["carrier"]["elements"], nlohmann::json({"x", "y", "z"}));
  EXPECT_TRUE(e["iotaBijective"].get<bool>());
}

TEST(Run, BinaryTreesExhaustBudget) {
  RunResult r = run_source("F = 1 + X*X\nmu F size nat budget 5\n");
  EXPECT_EQ(r.exit_code, 2);
  const auto& e = r.json["results"][0];
  EXPECT_EQ(e["status"], "budgetExceeded");
  EXPECT_EQ(sizes(e), (std::vector<std::size_t>{0, 1, 2, 5, 26}));
  EXPECT_FALSE(e.contains("stationaryAt"));
  EXPECT_NE(r.text.find("D[4] = 26"), std::string::npos);
}

TEST(Run, MalformedScript) {
  RunResult r = run_source("F = 1 +\nmu F\n");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.json["error"]["kind"], "SyntaxError");
  EXPECT_EQ(r.json["error"]["line"], 1);
  EXPECT_EQ(r.json["exitCode"], 1);
  EXPECT_EQ(r.text.rfind("error: SyntaxError at 1:", 0), 0u);
}

TEST(Run, ContinuesAfterBudget) {
  RunResult r = run_source("F = 1 + X*X\nmu F budget 3\nC = 3\nmu C\n");
  EXPECT_EQ(r.exit_code, 2);
  ASSERT_EQ(r.json["results"].size(), 2u);
  EXPECT_EQ(r.json["results"][0]["status"], "budgetExceeded");
  EXPECT_EQ(r.json["results"][1]["status"], "stationary");
  EXPECT_EQ(r.json["results"][1]["line"], 4);
}

TEST(Run, RuntimeErrorIsReportedPerCommand) {
  RunResult r = run_source("F = 2\nG = 1 + X\nalg A : G on 2 = [0, 1, 0]\ncata F A\nmu F\n");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.json["results"][0]["status"], "error");
  EXPECT_EQ(r.json["results"][0]["error"]["kind"], "NoAlgebra");
  EXPECT_EQ(r.json["results"][1]["status"], "stationary");
}

TEST(Run, FlagsAreDefaults) {
  Flags f;
  f.budget = 3;
  RunResult r = run_source("F = 1 + X*X\nmu F\nmu F budget 4\n", f);
  EXPECT_EQ(sizes(r.json["results"][0]).size(), 3u);
  EXPECT_EQ(sizes(r.json["results"][1]).size(), 4u);
  f.size = "plump:T";
  RunResult p = run_source("sig T = l:0 | b:2\nF = 2\nmu F\n", f);
  EXPECT_EQ(p.exit_code, 0);
  EXPECT_EQ(p.json["results"][0]["size"], "plump:T");
}

TEST(Run, IdentityHasEmptyInitialAlgebra) {
  RunResult r = run_source("I = X\nmu I\n");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.json["results"][0]["stationaryAt"], "1");
  EXPECT_EQ(r.json["results"][0]["carrier"]["size"], 0);
}

TEST(Run, ParityFold) {
  RunResult r = run_source("N = 1 + X\nalg Parity : N on 2 = [0, 1, 0]\ncata N Parity at 4\n");
  EXPECT_EQ(r.exit_code, 0);
  const auto& e = r.json["results"][0];
  EXPECT_EQ(e["map"]["table"], nlohmann::json({0, 1, 0, 1}));
  EXPECT_EQ(e["rows"].size(), 4u);
}

TEST(Run, NuAndEnumerate) {
  RunResult r = run_source("S = 2*X\nnu S budget 4\nsig T = l:0 | n:2\nenumerate T depth 3\n");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(sizes(r.json["results"][0]), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_EQ(r.json["results"][1]["levels"], nlohmann::json({0, 1, 2, 5}));
  EXPECT_EQ(r.json["results"][1]["count"], 5);
}

TEST(Run, CheckPasses) {
  RunResult r = run_source("sig T = l:0 | n:2\nF = 1 + X*X\nalg H : F on 2 = [0, 1, 1, 1, 1]\ncheck seed 5\n");
  EXPECT_EQ(r.exit_code, 0) << r.text;
  EXPECT_EQ(r.json["results"][0]["status"], "ok");
  EXPECT_GE(r.json["results"][0]["suites"].size(), 6u);
}

TEST(Run, Deterministic) {
  for (const auto& e : std::filesystem::directory_iterator(SIZEDMU_SAMPLES_DIR)) {
    if (e.path().extension() != ".smu") continue;
    std::string src = slurp(e.path());
    EXPECT_EQ(render(run_source(src), "json"), render(run_source(src), "json")) << e.path();
  }
}

TEST(Run, ScriptsExitAsAnnotated) {
  std::size_t seen = 0;
  for (const char* dir : {SIZEDMU_SAMPLES_DIR, SIZEDMU_SCRIPTS_DIR})
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() != ".smu") continue;
      std::string src = slurp(e.path());
      RunResult r = run_source(src);
      EXPECT_EQ(r.exit_code, expected_exit(src)) << e.path() << "\n" << r.text;
      EXPECT_EQ(r.json["exitCode"], r.exit_code);
      ++seen;
    }
  EXPECT_GE(seen, 10u);
}

TEST(Run, CheckSkipsFunctorsWhoseInnerFixedPointIsInfinite) {
  RunResult r = run_source("L = mu Y. 1 + X*Y\nF = 1 + X\ncheck\n");
  EXPECT_EQ(r.exit_code, 0) << r.text;
  const auto& suites = r.json["results"][0]["suites"];
  ASSERT_FALSE(suites.empty());
  bool skipped = false, ran = false;
  for (const auto& s : suites) {
    if (s["name"] == "functor-suites L") skipped = s.contains("skipped");
    if (s["name"] == "functor-laws F") ran = s["cases"].get<std::size_t>() > 0;
  }
  EXPECT_TRUE(skipped);
  EXPECT_TRUE(ran);
}
