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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ccbm/config.h"
#include "ccbm/report.h"
#include "ccbm/sim.h"
#include "ccbm/validate.h"

namespace ccbm {
namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::vector<std::uint64_t> Seeds(int n) {
  std::vector<std::uint64_t> s;
  for (int i = 1; i <= n; ++i) s.push_back(static_cast<std::uint64_t>(i));
  return s;
}

// All runs of one policy over seeds, in seed order.
std::vector<RunResult> RunSeeds(PolicyKind policy, int n) {
  SimConfig c;
  c.policy = policy;
  std::vector<RunResult> runs(n);
  RunOptions options;
  options.keep_user_steps = false;
  ParallelFor(n, [&](std::size_t i) {
    runs[i] = RunEpisode(c, static_cast<std::uint64_t>(i + 1), options);
  });
  return runs;
}

Stat FinalRegret(const std::vector<RunResult>& runs) {
  std::vector<double> v;
  for (const RunResult& r : runs) v.push_back(r.steps.back().cum_regret);
  return MeanStd(v);
}

double PooledSe(const Stat& a, const Stat& b, int n) {
  return std::sqrt((a.std * a.std + b.std * b.std) / n);
}

double MeanSlope(const std::vector<RunResult>& runs) {
  const std::size_t horizon = runs.front().steps.size();
  std::vector<double> mean(horizon, 0.0);
  for (const RunResult& r : runs) {
    for (std::size_t t = 0; t < horizon; ++t) mean[t] += r.steps[t].cum_regret / runs.size();
  }
  return LogLogSlope(mean, runs.front().t_stop, static_cast<int>(horizon));
}

void Criterion1() {
  const auto start = Clock::now();
  ValidationOptions o;
  o.submodularity_trials = 10000;
  const CheckReport r = CheckSubmodularity(o);
  const double s = Seconds(start);
  Report(1, r.passed() && r.trials >= 10000 && s < 5.0,
         Fmt("%d triples, %d violations, %.2f s (limit 5 s)", r.trials, r.failures, s));
}

void Criterion2() {
  const auto start = Clock::now();
  ValidationOptions o;
  o.greedy_trials = 1000;
  const CheckReport r = CheckGreedyBound(o);
  const double s = Seconds(start);
  Report(2, r.passed() && r.trials >= 1000 && s < 30.0,
         Fmt("%d instances, %d violations (bound or exact max-form), %.2f s (limit 30 s)",
             r.trials, r.failures, s));
}

struct DefaultRuns {
  std::vector<RunResult> ccbm, ccmab, ucb, oracle;
  double seconds = 0.0;
};

DefaultRuns RunDefaults() {
  const auto start = Clock::now();
  DefaultRuns d;
  d.ccbm = RunSeeds(PolicyKind::kCcbm, 20);
  d.ccmab = RunSeeds(PolicyKind::kCcmab, 20);
  d.ucb = RunSeeds(PolicyKind::kUcb, 20);
  d.seconds = Seconds(start);
  d.oracle = RunSeeds(PolicyKind::kOracle, 20);
  return d;
}

void Criterion3(const DefaultRuns& d) {
  const Stat ccbm = FinalRegret(d.ccbm);
  const Stat ccmab = FinalRegret(d.ccmab);
  const Stat ucb = FinalRegret(d.ucb);
  const Stat oracle = FinalRegret(d.oracle);
  const double se1 = PooledSe(ccbm, ccmab, 20);
  const double se2 = PooledSe(ccmab, ucb, 20);
  const bool ok = oracle.mean <= ccbm.mean && ccmab.mean - ccbm.mean > se1 &&
                  ucb.mean - ccmab.mean > se2 && d.seconds < 600.0;
  Report(3, ok,
         Fmt("mean cum_regret oracle %.1f, ccbm %.1f +- %.1f, ccmab %.1f +- %.1f, "
             "ucb %.1f +- %.1f; gap ccmab-ccbm %.1f (se %.1f), ucb-ccmab %.1f (se %.1f); "
             "%.1f s (limit 600 s)",
             oracle.mean, ccbm.mean, ccbm.std, ccmab.mean, ccmab.std, ucb.mean, ucb.std,
             ccmab.mean - ccbm.mean, se1, ucb.mean - ccmab.mean, se2, d.seconds));
}

void Criterion4(const DefaultRuns& d) {
  const RunResult& run = d.ccbm.front();
  const int m = run.num_users;
  const int t_stop = run.t_stop;
  bool ok = t_stop == 1600;
  int first_bad = 0;
  for (const StepMetrics& s : run.steps) {
    const int expected = s.t <= t_stop ? m * 8 : m * 4;
    if (s.probes != expected) {
      ok = false;
      if (first_bad == 0) first_bad = s.t;
    }
  }
  for (const RunResult& r : d.ccmab) {
    for (const StepMetrics& s : r.steps) ok = ok && s.probes == m * 8;
  }
  Report(4, ok,
         Fmt("t_stop %d; probes at t_stop %d, at t_stop+1 %d (M*B = %d, M*ceil(B/2) = %d)%s",
             t_stop, run.steps[t_stop - 1].probes, run.steps[t_stop].probes, m * 8, m * 4,
             first_bad ? Fmt("; first mismatch at t=%d", first_bad).c_str() : ""));
}

void Criterion5(const DefaultRuns& d) {
  const double ccbm = MeanSlope(d.ccbm);
  const double ucb = MeanSlope(d.ucb);
  Report(5, ccbm < 1.0 && ucb > ccbm,
         Fmt("log-log slope over [t_stop, T]: ccbm %.3f (target < 0.9: %s), ucb %.3f",
             ccbm, ccbm < 0.9 ? "met" : "missed", ucb));
}

void Criterion6() {
  const auto start = Clock::now();
  const std::vector<int> budgets = {2, 4, 8, 16};
  const std::vector<PolicyKind> policies = {PolicyKind::kCcbm, PolicyKind::kCcbmConstant,
                                            PolicyKind::kUcb};
  const SweepResult r = Sweep(SimConfig{}, SweepAxis::kBudget, budgets, Seeds(10), policies);
  bool ok = true;
  std::string detail;
  for (PolicyKind p : policies) {
    detail += PolicyName(p) + " [";
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      const double v = r.At(p, budgets[i]).reward.mean;
      detail += Fmt("%s%.4f", i ? " " : "", v);
      if (i > 0 && v < r.At(p, budgets[i - 1]).reward.mean) ok = false;
    }
    detail += "] ";
  }
  detail += "ccbm/ccbm-c [";
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const double ratio = r.At(PolicyKind::kCcbm, budgets[i]).reward.mean /
                         r.At(PolicyKind::kCcbmConstant, budgets[i]).reward.mean;
    detail += Fmt("%s%.3f", i ? " " : "", ratio);
    if (ratio < 0.95) ok = false;
  }
  detail += Fmt("] %.1f s", Seconds(start));
  Report(6, ok, detail);
}

void Criterion7() {
  const auto start = Clock::now();
  std::vector<int> caps;
  for (int k = 2; k <= 15; ++k) caps.push_back(k);
  const std::vector<PolicyKind> policies = {PolicyKind::kCcbm};
  const SweepResult r = Sweep(SimConfig{}, SweepAxis::kPenalty, caps, Seeds(10), policies);
  bool ok = true;
  std::string rewards, lmax;
  int best_k = caps.front();
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const SweepPoint& p = r.At(PolicyKind::kCcbm, caps[i]);
    rewards += Fmt("%s%.5f", i ? " " : "", p.reward.mean);
    lmax += Fmt("%s%.3f", i ? " " : "", p.l_max.mean);
    if (i > 0) {
      const SweepPoint& q = r.At(PolicyKind::kCcbm, caps[i - 1]);
      if (p.reward.mean < q.reward.mean || p.l_max.mean < q.l_max.mean) ok = false;
    }
    if (p.reward.mean > r.At(PolicyKind::kCcbm, best_k).reward.mean) best_k = caps[i];
  }
  const SweepPoint& lo = r.At(PolicyKind::kCcbm, 2);
  const SweepPoint& hi = r.At(PolicyKind::kCcbm, 15);
  ok = ok && hi.reward.mean > lo.reward.mean && hi.l_max.mean > lo.l_max.mean;
  Report(7, ok,
         Fmt("K=2..15 reward [%s]; L_max [%s]; best K %d; %.1f s", rewards.c_str(),
             lmax.c_str(), best_k, Seconds(start)));
}

void Criterion8(const DefaultRuns& d) {
  auto tail = [](const std::vector<RunResult>& runs) {
    std::vector<double> mean, var;
    for (const RunResult& r : runs) {
      const RunSummary s = Summarize(r, 500);
      mean.push_back(s.tail_throughput_mean);
      var.push_back(s.tail_throughput_var);
    }
    return std::pair{MeanStd(mean).mean, MeanStd(var).mean};
  };
  const auto [ccbm_mean, ccbm_var] = tail(d.ccbm);
  const auto [ucb_mean, ucb_var] = tail(d.ucb);
  const auto [oracle_mean, oracle_var] = tail(d.oracle);
  const double ratio = ccbm_mean / oracle_mean;
  Report(8, ccbm_mean >= ucb_mean && ccbm_var <= ucb_var,
         Fmt("last 500 steps: mean throughput ccbm %.4g, ucb %.4g bps; variance ccbm "
             "%.4g, ucb %.4g; ccbm/oracle %.3f (soft target 0.85: %s)",
             ccbm_mean, ucb_mean, ccbm_var, ucb_var, ratio, ratio >= 0.85 ? "met" : "missed"));
}

void Criterion9() {
  const auto start = Clock::now();
  const std::vector<int> users = {5, 10, 15, 20};
  const std::vector<PolicyKind> policies = {PolicyKind::kCcbm, PolicyKind::kOracle};
  const SweepResult r = Sweep(SimConfig{}, SweepAxis::kUsers, users, Seeds(10), policies);
  bool ok = true;
  std::string detail;
  double previous = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double c = r.At(PolicyKind::kCcbm, users[i]).l_max.mean;
    const double o = r.At(PolicyKind::kOracle, users[i]).l_max.mean;
    const double gap = (c - o) / o;
    detail += Fmt("M=%d gap %.4f (ccbm %.3f, oracle %.3f); ", users[i], gap, c, o);
    if (i > 0 && gap > previous) ok = false;
    previous = gap;
  }
  detail += Fmt("%.1f s", Seconds(start));
  Report(9, ok, detail);
}

void Criterion10() {
  ExperimentConfig config;
  config.sim.horizon = 500;
  bool identical = true;
  for (PolicyKind p : {PolicyKind::kCcbm, PolicyKind::kUcb}) {
    config.sim.policy = p;
    std::ostringstream a, b;
    WriteRunCsv(a, config, RunEpisode(config.sim, 77));
    WriteRunCsv(b, config, RunEpisode(config.sim, 77));
    identical = identical && a.str() == b.str() &&
                RunSummaryJson(config, RunEpisode(config.sim, 77)).dump() ==
                    RunSummaryJson(config, RunEpisode(config.sim, 77)).dump();
  }
  ValidationOptions o;
  o.los_trials = 10000;
  o.mean_trials = 1000;
  const CheckReport los = CheckLosOracle(o);
  const CheckReport mean = CheckIncrementalMean(o);
  Report(10, identical && los.passed() && los.trials >= 10000 && mean.passed() &&
                 mean.trials >= 1000,
         Fmt("byte-identical reruns: %s; LoS %d cases, %d mismatches; incremental mean "
             "%d sequences, %d over 1e-12 (%s)",
             identical ? "yes" : "no", los.trials, los.failures, mean.trials,
             mean.failures, mean.detail.c_str()));
}

}  // namespace
}  // namespace ccbm

int main() {
  using namespace ccbm;
  const auto start = Clock::now();
  Criterion1();
  Criterion2();
  const DefaultRuns runs = RunDefaults();
  Criterion3(runs);
  Criterion4(runs);
  Criterion5(runs);
  Criterion6();
  Criterion7();
  Criterion8(runs);
  Criterion9();
  Criterion10();
  std::printf("%d of 10 criteria failed; %.1f s total\n", failures, Seconds(start));
  return failures == 0 ? 0 : 1;
}
