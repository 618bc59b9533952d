// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the ccbm_sim binary end to end. CCBM_SIM_BINARY is set by CMake.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / "ccbm_cli" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  fs::path WriteConfig(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int Run(const std::string& args) {
    const std::string cmd = std::string(CCBM_SIM_BINARY) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string Read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Data rows of a CSV with comment headers, split into fields.
  std::vector<std::vector<std::string>> Rows(const fs::path& p,
                                             std::vector<std::string>* header) {
    std::istringstream in(Read(p));
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool have_header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      if (!have_header) {
        *header = fields;
        have_header = true;
      } else {
        rows.push_back(fields);
      }
    }
    return rows;
  }

  static constexpr char kSmall[] =
      "[simulation]\nhorizon = 60\n[policy]\nt_stop = 30\n";

  fs::path dir_;
};

TEST_F(CliTest, RunWritesTwoFilesAndIsRepeatable) {
  const fs::path cfg = WriteConfig("small.ini", kSmall);
  const fs::path a = dir_ / "a";
  const std::string cmd = "run " + cfg.string() + " --seed 42 --out-dir " + a.string();
  ASSERT_EQ(Run(cmd), 0);
  EXPECT_NE(Read(dir_ / "stdout.txt").find("final_cum_regret"), std::string::npos);

  std::set<std::string> names;
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(a)) {
    names.insert(e.path().filename());
    first[e.path().filename()] = Read(e.path());
  }
  EXPECT_EQ(names, (std::set<std::string>{"run_ccbm_seed42.csv", "run_ccbm_seed42.json"}));
  ASSERT_EQ(Run(cmd), 0);
  for (const std::string& n : names) EXPECT_EQ(Read(a / n), first[n]) << n;

  const std::string csv = Read(a / "run_ccbm_seed42.csv");
  EXPECT_EQ(csv.rfind("# schema: ccbm-run-csv/1", 0), 0u);
  EXPECT_NE(csv.find("# config: "), std::string::npos);
  const auto summary = nlohmann::json::parse(Read(a / "run_ccbm_seed42.json"));
  EXPECT_EQ(summary.at("config").at("policy").at("t_stop"), 30);
}

TEST_F(CliTest, BudgetAboveArmsIsAConfigError) {
  const fs::path cfg = WriteConfig("bad.ini", "[policy]\nbudget = 17\n");
  EXPECT_EQ(Run("run " + cfg.string() + " --out-dir " + (dir_ / "o").string()), 1);
  EXPECT_NE(Read(dir_ / "stderr.txt").find("A*C"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "o"));
}

TEST_F(CliTest, UnknownKeyReportsTheLine) {
  const fs::path cfg = WriteConfig("typo.ini", "[policy]\n\nbugdet = 4\n");
  EXPECT_EQ(Run("run " + cfg.string()), 1);
  const std::string err = Read(dir_ / "stderr.txt");
  EXPECT_NE(err.find("typo.ini:3"), std::string::npos) << err;
  EXPECT_NE(err.find("bugdet"), std::string::npos) << err;
}

TEST_F(CliTest, UsageErrorsExitOne) {
  const fs::path cfg = WriteConfig("small.ini", kSmall);
  EXPECT_EQ(Run("run " + (dir_ / "missing.ini").string()), 1);
  EXPECT_EQ(Run("run " + cfg.string() + " --seed x"), 1);
  EXPECT_EQ(Run("sweep " + cfg.string() + " --axis speed"), 1);
  EXPECT_EQ(Run("compare " + cfg.string() + " --policies ccbm"), 1);
  EXPECT_EQ(Run("frobnicate"), 1);
}

TEST_F(CliTest, UnwritableOutputIsARuntimeFailure) {
  const fs::path cfg = WriteConfig("small.ini", kSmall);
  const fs::path blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  EXPECT_EQ(Run("run " + cfg.string() + " --out-dir " + (blocker / "sub").string()), 2);
}

TEST_F(CliTest, CompareCardinalityOracleRowsAndKink) {
  const fs::path cfg = WriteConfig("small.ini", kSmall);
  const fs::path out = dir_ / "cmp";
  ASSERT_EQ(Run("compare " + cfg.string() +
                " --policies oracle,ccbm,ccmab,ucb --seeds 1..3 --window 5 --out-dir " +
                out.string()),
            0);
  std::vector<std::string> header;
  const auto rows = Rows(out / "compare.csv", &header);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);
  ASSERT_TRUE(col.count("policy") && col.count("seed") && col.count("cum_regret") &&
              col.count("probes") && col.count("t"));
  EXPECT_EQ(rows.size(), 4u * 3 * 60);

  std::set<std::pair<std::string, std::string>> runs;
  std::map<int, int> ccbm_probes;
  for (const auto& r : rows) {
    runs.insert({r[col["policy"]], r[col["seed"]]});
    if (r[col["policy"]] == "oracle") EXPECT_EQ(std::stod(r[col["cum_regret"]]), 0.0);
    if (r[col["policy"]] == "ccbm" && r[col["seed"]] == "1") {
      ccbm_probes[std::stoi(r[col["t"]])] = std::stoi(r[col["probes"]]);
    }
  }
  EXPECT_EQ(runs.size(), 12u);
  EXPECT_EQ(ccbm_probes.at(30), 5 * 8);
  EXPECT_EQ(ccbm_probes.at(31), 5 * 4);
  EXPECT_TRUE(fs::exists(out / "compare_summary.json"));
}

TEST_F(CliTest, PenaltySweepHasFourteenRowsPerMetric) {
  const fs::path cfg = WriteConfig("small.ini", kSmall);
  const fs::path out = dir_ / "sw";
  ASSERT_EQ(Run("sweep " + cfg.string() +
                " --axis penalty --values 2..15 --seeds 1 --policies ccbm --out-dir " +
                out.string()),
            0);
  std::vector<std::string> header;
  const auto rows = Rows(out / "sweep_penalty.csv", &header);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);
  std::map<std::string, int> per_metric;
  for (const auto& r : rows) ++per_metric[r[col.at("metric")]];
  ASSERT_FALSE(per_metric.empty());
  for (const auto& [metric, n] : per_metric) EXPECT_EQ(n, 14) << metric;
  const auto j = nlohmann::json::parse(Read(out / "sweep_penalty.json"));
  EXPECT_TRUE(j.contains("config"));
  EXPECT_EQ(j.at("seeds").size(), 1u);
}

TEST_F(CliTest, ValidatePasses) {
  EXPECT_EQ(Run("validate"), 0);
  const std::string out = Read(dir_ / "stdout.txt");
  EXPECT_EQ(out.find("FAIL"), std::string::npos) << out;
  EXPECT_NE(out.find("PASS"), std::string::npos);
}

}  // namespace
