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

#include "ccbm/report.h"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ccbm {
namespace {

// Fixed formatting keeps outputs byte-identical across runs.
std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void WriteHeader(std::ostream& out, const char* schema,
                 const nlohmann::json& config) {
  out << "# schema: " << schema << '\n';
  out << "# config: " << config.dump() << '\n';
}

nlohmann::json SummaryFields(const RunSummary& s) {
  return {
      {"final_cum_regret", s.final_cum_regret},
      {"final_cum_approx_regret", s.final_cum_approx_regret},
      {"steady_reward", s.steady_reward},
      {"steady_throughput_bps", s.steady_throughput_bps},
      {"steady_l_max", s.steady_l_max},
      {"tail_throughput_mean_bps", s.tail_throughput_mean},
      {"tail_throughput_var", s.tail_throughput_var},
      {"mean_probes_per_step", s.mean_probes_per_step},
      {"overflow_count", s.overflow_count},
  };
}

nlohmann::json StatJson(const Stat& s) {
  return {{"mean", s.mean}, {"std", s.std}};
}

}  // namespace

void WriteRunCsv(std::ostream& out, const ExperimentConfig& config,
                 const RunResult& run) {
  WriteHeader(out, kRunCsvSchema, ConfigToJson(config));
  out << "t,user,grid_x,grid_y,policy,probes,committed_ap,committed_beam,"
         "reward,oracle_reward,cum_regret,cum_approx_regret,throughput_bps,"
         "l_max\n";
  const double approx = 1.0 - 1.0 / std::numbers::e;
  double regret = 0.0;
  double oracle = 0.0;
  double policy = 0.0;
  for (const UserStep& r : run.user_steps) {
    regret += r.oracle_reward - r.reward;
    oracle += r.oracle_reward;
    policy += r.reward;
    out << r.t << ',' << r.user << ',' << r.grid.gx << ',' << r.grid.gy << ','
        << run.policy << ',' << r.probes << ',' << r.committed.ap << ','
        << r.committed.beam << ',' << Num(r.reward) << ','
        << Num(r.oracle_reward) << ',' << Num(regret) << ','
        << Num(approx * oracle - policy) << ',' << Num(r.throughput_bps) << ','
        << run.steps[r.t - 1].l_max << '\n';
  }
}

nlohmann::json RunSummaryJson(const ExperimentConfig& config,
                              const RunResult& run) {
  nlohmann::json j;
  j["schema"] = kRunSummarySchema;
  j["config"] = ConfigToJson(config);
  j["policy"] = run.policy;
  j["seed"] = run.seed;
  j["t_stop"] = run.t_stop;
  j["steps"] = run.steps.size();
  j["state_entries"] = run.state_entries;
  j["summary"] = SummaryFields(Summarize(run));
  return j;
}

void WriteCompareCsv(std::ostream& out, const ExperimentConfig& config,
                     std::span<const RunResult> runs, int window) {
  nlohmann::json echo = ConfigToJson(config);
  echo["output"]["window"] = window;
  WriteHeader(out, kCompareCsvSchema, echo);
  out << "policy,seed,t,probes,reward,oracle_reward,cum_regret,"
         "cum_approx_regret,throughput_bps,throughput_smoothed_bps,l_max\n";
  for (const RunResult& run : runs) {
    std::vector<double> throughput;
    throughput.reserve(run.steps.size());
    for (const StepMetrics& s : run.steps) {
      throughput.push_back(s.mean_throughput_bps);
    }
    const std::vector<double> smooth = SlidingMean(throughput, window);
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      const StepMetrics& s = run.steps[i];
      out << run.policy << ',' << run.seed << ',' << s.t << ',' << s.probes
          << ',' << Num(s.reward) << ',' << Num(s.oracle_reward) << ','
          << Num(s.cum_regret) << ',' << Num(s.cum_approx_regret) << ','
          << Num(s.mean_throughput_bps) << ',' << Num(smooth[i]) << ','
          << s.l_max << '\n';
    }
  }
}

nlohmann::json SweepJson(const ExperimentConfig& config,
                         const SweepResult& sweep) {
  nlohmann::json j;
  j["schema"] = kSweepJsonSchema;
  j["config"] = ConfigToJson(config);
  j["axis"] = SweepAxisName(sweep.axis);
  j["values"] = sweep.values;
  j["seeds"] = sweep.seeds;
  nlohmann::json points = nlohmann::json::array();
  for (const SweepPoint& p : sweep.points) {
    nlohmann::json runs = nlohmann::json::array();
    for (const RunSummary& r : p.runs) runs.push_back(SummaryFields(r));
    points.push_back({{"policy", PolicyName(p.policy)},
                      {"value", p.value},
                      {"reward", StatJson(p.reward)},
                      {"throughput_bps", StatJson(p.throughput_bps)},
                      {"l_max", StatJson(p.l_max)},
                      {"cum_regret", StatJson(p.cum_regret)},
                      {"runs", runs}});
  }
  j["points"] = points;
  return j;
}

void WriteSweepCsv(std::ostream& out, const ExperimentConfig& config,
                   const SweepResult& sweep) {
  WriteHeader(out, kSweepCsvSchema, ConfigToJson(config));
  out << "policy,axis,value,metric,mean,std\n";
  const std::string axis = SweepAxisName(sweep.axis);
  for (const SweepPoint& p : sweep.points) {
    const std::pair<const char*, const Stat*> metrics[] = {
        {"reward", &p.reward},
        {"throughput_bps", &p.throughput_bps},
        {"l_max", &p.l_max},
        {"cum_regret", &p.cum_regret},
    };
    for (const auto& [name, stat] : metrics) {
      out << PolicyName(p.policy) << ',' << axis << ',' << p.value << ','
          << name << ',' << Num(stat->mean) << ',' << Num(stat->std) << '\n';
    }
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ccbm
