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

// Command-line front end: run, compare, sweep and validate.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccbm/config.h"
#include "ccbm/report.h"
#include "ccbm/sim.h"
#include "ccbm/validate.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

namespace fs = std::filesystem;
using ccbm::ExperimentConfig;

// Raised for bad flag values so they map to the config exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config_path;
  std::string seed;
  std::string seeds;
  std::string out_dir;
  std::string policies;
  std::string axis;
  std::string values;
  int window = 0;
};

ExperimentConfig Resolve(const Flags& flags) {
  ExperimentConfig config = ccbm::LoadConfig(flags.config_path);
  try {
    if (!flags.seed.empty()) {
      const auto seeds = ccbm::ParseSeedList(flags.seed);
      if (seeds.size() != 1) throw std::invalid_argument("--seed takes one value");
      config.sim.seed = seeds.front();
    }
    if (!flags.seeds.empty()) config.sweep.seeds = ccbm::ParseSeedList(flags.seeds);
    if (!flags.policies.empty()) {
      config.sweep.policies = ccbm::ParsePolicyList(flags.policies);
    }
    if (!flags.axis.empty()) config.sweep.axis = ccbm::ParseSweepAxis(flags.axis);
    if (!flags.values.empty()) config.sweep.values = ccbm::ParseIntList(flags.values);
    if (!flags.out_dir.empty()) config.output.out_dir = flags.out_dir;
    if (flags.window != 0) {
      if (flags.window < 1) throw std::invalid_argument("--window must be >= 1");
      config.output.window = flags.window;
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

fs::path PrepareOutDir(const ExperimentConfig& config) {
  const fs::path dir = config.output.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

int CmdRun(const Flags& flags) {
  const ExperimentConfig config = Resolve(flags);
  const ccbm::RunResult run = ccbm::RunEpisode(config.sim, config.sim.seed);
  const fs::path dir = PrepareOutDir(config);
  const std::string stem =
      "run_" + run.policy + "_seed" + std::to_string(run.seed);

  std::ostringstream csv;
  ccbm::WriteRunCsv(csv, config, run);
  ccbm::WriteFile(dir / (stem + ".csv"), csv.str());
  ccbm::WriteFile(dir / (stem + ".json"),
                  ccbm::RunSummaryJson(config, run).dump(2) + "\n");

  const ccbm::RunSummary s = ccbm::Summarize(run);
  double throughput = 0.0;
  double l_max = 0.0;
  for (const auto& step : run.steps) {
    throughput += step.mean_throughput_bps;
    l_max += step.l_max;
  }
  std::cout << "policy " << run.policy << " seed " << run.seed << '\n'
            << "final_cum_regret " << s.final_cum_regret << '\n'
            << "mean_throughput_bps " << throughput / run.steps.size() << '\n'
            << "mean_l_max " << l_max / run.steps.size() << '\n'
            << "final_l_max " << run.steps.back().l_max << '\n';
  return kExitOk;
}

int CmdCompare(const Flags& flags) {
  const ExperimentConfig config = Resolve(flags);
  const auto& policies = config.sweep.policies;
  const auto& seeds = config.sweep.seeds;
  if (policies.size() < 2) throw UsageError("compare needs at least two policies");

  std::vector<ccbm::SimConfig> configs;
  for (ccbm::PolicyKind p : policies) {
    ccbm::SimConfig c = config.sim;
    c.policy = p;
    try {
      c.Validate();
    } catch (const std::invalid_argument& e) {
      throw ccbm::ConfigError(flags.config_path, 0,
                              ccbm::PolicyName(p) + ": " + e.what());
    }
    configs.push_back(c);
  }
  std::vector<ccbm::RunResult> runs(configs.size() * seeds.size());
  ccbm::RunOptions options;
  options.keep_user_steps = false;
  ccbm::ParallelFor(runs.size(), [&](std::size_t j) {
    runs[j] = ccbm::RunEpisode(configs[j / seeds.size()],
                               seeds[j % seeds.size()], options);
  });

  const fs::path dir = PrepareOutDir(config);
  std::ostringstream csv;
  ccbm::WriteCompareCsv(csv, config, runs, config.output.window);
  ccbm::WriteFile(dir / "compare.csv", csv.str());

  nlohmann::json summary;
  summary["schema"] = ccbm::kRunSummarySchema;
  summary["config"] = ccbm::ConfigToJson(config);
  nlohmann::json per_policy = nlohmann::json::object();
  for (std::size_t p = 0; p < configs.size(); ++p) {
    std::vector<double> regret, throughput;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const ccbm::RunSummary r = ccbm::Summarize(runs[p * seeds.size() + s]);
      regret.push_back(r.final_cum_regret);
      throughput.push_back(r.tail_throughput_mean);
    }
    const ccbm::Stat reg = ccbm::MeanStd(regret);
    const ccbm::Stat thr = ccbm::MeanStd(throughput);
    per_policy[ccbm::PolicyName(policies[p])] = {
        {"final_cum_regret", {{"mean", reg.mean}, {"std", reg.std}}},
        {"tail_throughput_bps", {{"mean", thr.mean}, {"std", thr.std}}}};
    std::cout << ccbm::PolicyName(policies[p]) << " final_cum_regret "
              << reg.mean << " +- " << reg.std << " tail_throughput_bps "
              << thr.mean << '\n';
  }
  summary["policies"] = per_policy;
  ccbm::WriteFile(dir / "compare_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int CmdSweep(const Flags& flags) {
  const ExperimentConfig config = Resolve(flags);
  ccbm::SweepResult result;
  try {
    result = ccbm::Sweep(config.sim, config.sweep.axis, config.sweep.values,
                         config.sweep.seeds, config.sweep.policies);
  } catch (const std::invalid_argument& e) {
    throw ccbm::ConfigError(flags.config_path, 0, e.what());
  }
  const fs::path dir = PrepareOutDir(config);
  const std::string stem = "sweep_" + ccbm::SweepAxisName(result.axis);
  ccbm::WriteFile(dir / (stem + ".json"),
                  ccbm::SweepJson(config, result).dump(2) + "\n");
  std::ostringstream csv;
  ccbm::WriteSweepCsv(csv, config, result);
  ccbm::WriteFile(dir / (stem + ".csv"), csv.str());
  for (const auto& p : result.points) {
    std::cout << ccbm::PolicyName(p.policy) << ' '
              << ccbm::SweepAxisName(result.axis) << '=' << p.value
              << " reward " << p.reward.mean << " l_max " << p.l_max.mean
              << " throughput_bps " << p.throughput_bps.mean << '\n';
  }
  return kExitOk;
}

int CmdValidate() {
  bool ok = true;
  for (const ccbm::CheckReport& r : ccbm::RunValidation({})) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.detail
              << '\n';
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual combinatorial beam management simulator"};
  app.require_subcommand(1);
  Flags flags;

  CLI::App* run = app.add_subcommand("run", "Run one episode");
  run->add_option("config", flags.config_path, "Config file")->required();
  run->add_option("--seed", flags.seed, "Seed (overrides [simulation] seed)");
  run->add_option("--out-dir", flags.out_dir, "Output directory");

  CLI::App* compare = app.add_subcommand("compare", "Compare policies over seeds");
  compare->add_option("config", flags.config_path, "Config file")->required();
  compare->add_option("--policies", flags.policies, "Comma list, e.g. oracle,ccbm,ucb");
  compare->add_option("--seeds", flags.seeds, "Comma list or a..b range");
  compare->add_option("--out-dir", flags.out_dir, "Output directory");
  compare->add_option("--window", flags.window, "Throughput smoothing window (steps)");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  sweep->add_option("config", flags.config_path, "Config file")->required();
  sweep->add_option("--axis", flags.axis, "budget, penalty or users");
  sweep->add_option("--values", flags.values, "Comma list or a..b range");
  sweep->add_option("--seeds", flags.seeds, "Comma list or a..b range");
  sweep->add_option("--policies", flags.policies, "Comma list");
  sweep->add_option("--out-dir", flags.out_dir, "Output directory");

  CLI::App* validate = app.add_subcommand("validate", "Run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return CmdRun(flags);
    if (compare->parsed()) return CmdCompare(flags);
    if (sweep->parsed()) return CmdSweep(flags);
    if (validate->parsed()) return CmdValidate();
  } catch (const ccbm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
