// Copyright 2026 The rolegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace rolegraph {
namespace {

namespace fs = std::filesystem;

const std::string kSamples = ROLEGRAPH_SAMPLES_DIR;
const std::string kK0 = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rolegraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rolegraph-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string sample(const std::string& name) const { return kSamples + "/" + name; }

  fs::path dir_;
};

TEST_F(CliTest, ValidateOk) {
  Result r = run({"validate", sample("diamond_policy.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok\n");
}

TEST_F(CliTest, ValidateReportsCycle) {
  auto p = write("cycle.json", R"({"roles": ["a", "b"], "arcs": [["a", "b"], ["b", "a"]]})");
  Result r = run({"validate", p});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.out.rfind("cycle\t", 0), 0u);
  Result j = run({"--format", "json", "validate", p});
  EXPECT_NE(j.out.find("\"valid\": false"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"flags", write("bad.json", "{\"roles\": [")}).code, 2);
  EXPECT_EQ(run({"flags", write("schema.json", R"({"roles": ["a"], "owner": "x"})")}).code, 3);
  EXPECT_EQ(run({"flags", write("cycle.json", R"({"roles": ["a"], "arcs": [["a", "a"]]})")}).code, 4);
  EXPECT_EQ(run({"flags", (dir_ / "missing.json").string()}).code, 1);
  EXPECT_EQ(run({"optimize", sample("diamond_policy.json"), "--algorithm", "V"}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, BudgetExceededIsAlgorithmFailure) {
  Result r = run({"--node-budget", "3", "optimize", sample("diamond_policy.json"), "--algorithm", "III"});
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}

TEST_F(CliTest, FlagsText) {
  Result r = run({"flags", sample("diamond_policy.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tree_like\tfalse\n"), std::string::npos);
  EXPECT_NE(r.out.find("single\ttrue\n"), std::string::npos);
}

TEST_F(CliTest, OptimizeWritesEquivalentPolicyAndReport) {
  auto out = (dir_ / "out.json").string();
  auto report = (dir_ / "report.txt").string();
  for (const auto& algo : algorithm_names()) {
    Result r = run({"optimize", sample("diamond_policy.json"), "--algorithm", algo, "-o", out, "--report", report});
    ASSERT_EQ(r.code, 0) << algo << ": " << r.err;
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    RbacModel before = io::parse_policy(cli::detail::read_file(sample("diamond_policy.json")));
    EXPECT_TRUE(models_equivalent(before, io::parse_policy(text))) << algo;
    std::ifstream rep(report);
    std::string rtext((std::istreambuf_iterator<char>(rep)), {});
    EXPECT_EQ(rtext.rfind("algorithm\t" + algo + "\n", 0), 0u) << rtext;
  }
}

TEST_F(CliTest, OptimizeDefaultsToStdoutAndStderr) {
  Result r = run({"optimize", sample("diamond_policy.json"), "--algorithm", "IV"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.front(), '{');
  EXPECT_NE(r.err.find("arcs_removed\t1"), std::string::npos);
}

TEST_F(CliTest, RiskLines) {
  auto p = write("worked.json", R"({"roles": ["root", "r1", "r2"], "permissions": ["a", "b", "c"],
    "arcs": [["root", "r1"], ["root", "r2"]], "role_permissions": {"r1": ["a"], "r2": ["a", "b", "c"]}})");
  Result r = run({"risk", p});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a\t1/2\t0.500000\nb\t1/4\t0.250000\nc\t1/4\t0.250000\n");
}

TEST_F(CliTest, KeysFromFlagOrEnvironment) {
  Result flag = run({"keys", sample("tree_hierarchy.json"), "--k0", kK0});
  EXPECT_EQ(flag.code, 0);
  EXPECT_EQ(flag.out.rfind("O1\td278699b8eb3adeec23a8d25c81e8feb40555321cd7b41c1d675bc28a0993ffb\n", 0), 0u);
  ::setenv("ROLEGRAPH_K0", kK0.c_str(), 1);
  Result env = run({"keys", sample("tree_hierarchy.json")});
  ::unsetenv("ROLEGRAPH_K0");
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(run({"keys", sample("tree_hierarchy.json")}).code, 3);
  EXPECT_EQ(run({"keys", sample("tree_hierarchy.json"), "--k0", "abc"}).code, 3);
}

TEST_F(CliTest, KeysOnDagNeedGeneralizedMode) {
  EXPECT_EQ(run({"keys", sample("dag_hierarchy.json"), "--k0", kK0}).code, 4);
  Result a = run({"--seed", "5", "keys", sample("dag_hierarchy.json"), "--k0", kK0, "--generalized"});
  Result b = run({"--seed", "5", "keys", sample("dag_hierarchy.json"), "--k0", kK0, "--generalized"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  Result all = run({"keys", sample("dag_hierarchy.json"), "--k0", kK0, "--generalized", "--sharing", "all_paths"});
  EXPECT_EQ(all.code, 0);
}

TEST_F(CliTest, AccessModes) {
  Result r = run({"access", sample("tree_hierarchy.json"), "--subject", sample("subject.json"), "--k0", kK0,
                  "--mode", "discretionary"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "O1\tgranted\nO2\tgranted\nO3\tdenied\nO4\tgranted\n");
  Result one = run({"access", sample("tree_hierarchy.json"), "--subject", sample("subject.json"), "--k0", kK0,
                    "--target", "O3"});
  EXPECT_EQ(one.out, "O3\tdenied\n");
}

TEST_F(CliTest, SimulateAttackMatrix) {
  EXPECT_NE(run({"simulate", "--scenario", sample("keychange_honest.json")}).out.find("outcome\tkey_changed"),
            std::string::npos);
  EXPECT_NE(run({"simulate", "--scenario", sample("keychange_intercept.json")}).out.find("outcome\taborted_auth_failure"),
            std::string::npos);
  EXPECT_NE(run({"simulate", "--scenario", sample("keychange_forge.json")}).out.find("outcome\taborted_auth_failure"),
            std::string::npos);
  EXPECT_NE(run({"simulate", "--scenario", sample("keychange_forge_no_auth.json")}).out.find("outcome\tcompromised"),
            std::string::npos);
  Result j = run({"--format", "json", "simulate", "--scenario", sample("keychange_honest.json")});
  EXPECT_NE(j.out.find("\"outcome\": \"key_changed\""), std::string::npos);
}

TEST_F(CliTest, CombineAnswersQueries) {
  Result r = run({"combine", "--mac", sample("mac.json"), "--policy", sample("tree_policy.json"), "--queries",
                  sample("queries.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "0\t(top-secret{crypto,nuclear}, admin)\t(secret{crypto}, staff)\ttrue\n"
            "1\t(secret{crypto}, dev)\t(secret{crypto}, ops)\tfalse\n"
            "2\t(unclassified{}, admin)\t(secret{}, staff)\tfalse\n");
  Result clones = run({"combine", "--mac", sample("mac.json"), "--policy", sample("diamond_policy.json"),
                       "--queries", sample("queries.json")});
  EXPECT_EQ(clones.code, 4);
  EXPECT_NE(clones.err.find("staff#1"), std::string::npos);
}

}  // namespace
}  // namespace rolegraph
