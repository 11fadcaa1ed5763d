// Copyright 2026 The hwr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("hwr_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  std::string cmd = std::string(HWR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// CSV body without the '#' header lines.
std::string body(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

fs::path write_matrix(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

TEST(Cli, InvalidConfigExitsTwo) {
  auto dir = scratch("invalid");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run("que" + out), 2);
  EXPECT_EQ(run("statistical" + out), 2);
  EXPECT_EQ(run("rank-density" + out), 2);
  EXPECT_EQ(run("multiplicities --p 4" + out), 2);
  EXPECT_EQ(run("multiplicities --p 3 --N 1" + out), 2);
  EXPECT_EQ(run("verify-bounds --torus bogus" + out), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  auto bad = write_matrix(dir, "bad.json", "[[2,0],[0,1]]");
  EXPECT_EQ(run("que --A " + bad.string() + out), 2);
  EXPECT_EQ(run("que --A " + (dir / "missing.json").string() + out), 2);
}

TEST(Cli, SelftestQuick) {
  auto dir = scratch("selftest");
  EXPECT_EQ(run("selftest --quick --out " + dir.string()), 0);
  auto j = nlohmann::json::parse(slurp(dir / "selftest.json"));
  EXPECT_EQ(j["failures"], 0);
  EXPECT_EQ(j["exit_status"], 0);
  EXPECT_GT(j["summary"]["checks"].get<int>(), 20);
}

TEST(Cli, QueDeterministicAndEchoesConfig) {
  auto dir = scratch("que");
  auto cfg = write_matrix(dir, "cat.json", R"({"A": [[2,1],[1,1]], "primes": {"max": 23}, "seed": 5})");
  auto a = dir / "a", b = dir / "b";
  ASSERT_EQ(run("que --A " + cfg.string() + " --jobs 1 --out " + a.string()), 0);
  ASSERT_EQ(run("que --A " + cfg.string() + " --jobs 4 --out " + b.string()), 0);
  EXPECT_EQ(body(a / "que.csv"), body(b / "que.csv"));
  std::string csv = slurp(a / "que.csv");
  EXPECT_EQ(csv.rfind("# config: ", 0), 0u);
  EXPECT_NE(csv.find("# timestamp: "), std::string::npos);
  EXPECT_NE(csv.find("5,,,,,p divides disc(charpoly)"), std::string::npos);
  auto j = nlohmann::json::parse(slurp(a / "que.json"));
  EXPECT_EQ(j["config"]["max_prime"], 23);
  EXPECT_EQ(j["config"]["seed"], 5);
  EXPECT_EQ(j["summary"]["violations"], 0);
}

TEST(Cli, RankDensity) {
  auto dir = scratch("density");
  auto cat4 = write_matrix(dir, "cat4.json", "[[0,0,1,0],[0,0,0,1],[-1,0,3,1],[0,-1,1,4]]");
  ASSERT_EQ(run("rank-density --A " + cat4.string() + " --max-prime 20000 --out " + dir.string()), 0);
  auto j = nlohmann::json::parse(slurp(dir / "rank-density.json"));
  const double d1 = j["summary"]["delta"]["1"], d2 = j["summary"]["delta"]["2"];
  EXPECT_NEAR(d1 + d2, 1.0, 1e-12);
  EXPECT_TRUE(j["summary"]["genericity"]["strongly_generic"].get<bool>());
}

TEST(Cli, FieldSubcommands) {
  auto dir = scratch("field");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run("verify-bounds --p 5 --torus 'split;inert'" + out), 0);
  EXPECT_EQ(run("multiplicities --p 5,7" + out), 0);
  EXPECT_EQ(run("self-reducibility --p 3 --N 2" + out), 0);
  auto j = nlohmann::json::parse(slurp(dir / "multiplicities.json"));
  EXPECT_EQ(j["summary"].size(), 4u);
  std::string csv = body(dir / "verify-bounds.csv");
  EXPECT_EQ(csv.rfind("p,m,N,torus,chi,v,re,im,abs,bound,ratio,admissible\n", 0), 0u);
}

}  // namespace
