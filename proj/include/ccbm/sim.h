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

#ifndef CCBM_SIM_H_
#define CCBM_SIM_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccbm/baselines.h"
#include "ccbm/ccbm.h"
#include "ccbm/context.h"
#include "ccbm/env.h"
#include "ccbm/policy.h"

namespace ccbm {

enum class PolicyKind { kCcbm, kCcbmConstant, kCcmab, kUcb, kOracle };

std::string PolicyName(PolicyKind kind);
// Accepts ccbm, ccbm-c, ccmab (or cc-mab), ucb, oracle.
PolicyKind ParsePolicyKind(std::string_view name);

struct SimConfig {
  EnvironmentConfig env;
  PolicyKind policy = PolicyKind::kCcbm;

  int budget = 8;
  int candidate_aps = 2;
  int buckets = 4;  // 0 selects ceil(T^(1/4)) clipped to [1, C]
  int load_cap = 9;
  int t_stop = 0;   // 0 selects the number of grids
  ControlMode control = ControlMode::kSmooth;

  int horizon = 5000;
  std::uint64_t seed = 1;
  double cell = 1.0;
  double pred_noise_db = 5.0;
  double meas_noise_db = 1.0;
  double step_duration = 0.03;
  double bandwidth_hz = 2.16e9;
  // Thermal noise over 2.16 GHz plus a 10 dB noise figure.
  double noise_floor_dbm = -70.7;
  RewardWindow window;

  // Throws std::invalid_argument naming the violated constraint.
  void Validate() const;

  int ResolvedBuckets() const;
  int ResolvedTStop() const;
  CcbmParams ResolvedCcbmParams() const;
};

// One user at one step.
struct UserStep {
  int t = 0;
  int user = 0;
  GridIndex grid;
  int probes = 0;
  ArmId committed;
  bool overflow = false;
  // Max-form reward of the probed set on true (noise-free) penalized values.
  double reward = 0.0;
  // Best true penalized reward among the candidate arms, same loads.
  double oracle_reward = 0.0;
  double throughput_bps = 0.0;
};

// Per-step aggregate over users.
struct StepMetrics {
  int t = 0;
  int probes = 0;
  double reward = 0.0;
  double oracle_reward = 0.0;
  double cum_regret = 0.0;
  double cum_approx_regret = 0.0;
  double mean_throughput_bps = 0.0;
  int l_max = 0;
  int connected = 0;
};

struct RunResult {
  std::string policy;
  std::uint64_t seed = 0;
  int num_users = 0;
  int t_stop = 0;
  std::vector<StepMetrics> steps;
  std::vector<UserStep> user_steps;  // empty unless requested
  int overflow_count = 0;
  std::size_t state_entries = 0;
  // Probe counts by CCBM selection branch (zero for other policies).
  std::vector<int> branch_counts;
};

struct RunOptions {
  bool keep_user_steps = true;
  // Checked after every user; a false return aborts with std::logic_error.
  std::function<bool(const LoadTable&, int connected_users)> load_invariant;
};

RunResult RunEpisode(const SimConfig& config, std::uint64_t seed,
                     const RunOptions& options = {});

std::unique_ptr<Policy> MakePolicy(const SimConfig& config,
                                   const Environment& env, int num_grids);

struct RegretCurves {
  std::vector<double> cumulative;   // sum of (oracle - policy)
  std::vector<double> approximate;  // (1 - 1/e) * sum oracle - sum policy
};

// Throws std::invalid_argument on a length mismatch.
RegretCurves ComputeRegretCurves(std::span<const double> policy_rewards,
                                 std::span<const double> oracle_rewards);

double ThroughputBps(double rss_dbm, double bandwidth_hz, double noise_floor_dbm);

int LMax(const LoadTable& loads);

struct RunSummary {
  double final_cum_regret = 0.0;
  double final_cum_approx_regret = 0.0;
  // Per user-step means over the steady window t > t_stop (whole run when
  // t_stop >= T).
  double steady_reward = 0.0;
  double steady_throughput_bps = 0.0;
  double steady_l_max = 0.0;
  // Over the last `tail_steps` steps, on the per-step user-mean series.
  double tail_throughput_mean = 0.0;
  double tail_throughput_var = 0.0;
  double mean_probes_per_step = 0.0;
  int overflow_count = 0;
};

RunSummary Summarize(const RunResult& run, int tail_steps = 500);

// Log-log least-squares slope of the cumulative regret over [t_from, t_to].
double LogLogSlope(std::span<const double> cum_regret, int t_from, int t_to);

// Centered moving average; the window shrinks at the ends.
std::vector<double> SlidingMean(std::span<const double> series, int window);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

Stat MeanStd(std::span<const double> values);

enum class SweepAxis { kBudget, kPenalty, kUsers };

std::string SweepAxisName(SweepAxis axis);
SweepAxis ParseSweepAxis(std::string_view name);

// Copy of `base` with the axis parameter set to `value`.
SimConfig WithAxisValue(const SimConfig& base, SweepAxis axis, int value);

struct SweepPoint {
  PolicyKind policy = PolicyKind::kCcbm;
  int value = 0;
  std::vector<RunSummary> runs;  // one per seed, seed order
  Stat reward;
  Stat throughput_bps;
  Stat l_max;
  Stat cum_regret;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kBudget;
  std::vector<int> values;
  std::vector<std::uint64_t> seeds;
  std::vector<SweepPoint> points;  // policy-major, then value order

  const SweepPoint& At(PolicyKind policy, int value) const;
};

SweepResult Sweep(const SimConfig& base, SweepAxis axis,
                  std::span<const int> values,
                  std::span<const std::uint64_t> seeds,
                  std::span<const PolicyKind> policies);

// Worker count: CCBM_SIM_THREADS if set and positive, otherwise the
// hardware concurrency.
int WorkerCount();

// Runs jobs[i] for every i on a worker pool; returns when all are done.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace ccbm

#endif  // CCBM_SIM_H_
