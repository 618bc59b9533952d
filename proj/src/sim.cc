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

#include "ccbm/sim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace ccbm {
namespace {

std::mt19937_64 StreamFor(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

constexpr std::uint32_t kEnvStream = 0x656e76;     // "env"
constexpr std::uint32_t kPolicyStream = 0x706f6c;  // "pol"

void Require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool IsCcbmFamily(PolicyKind kind) {
  return kind == PolicyKind::kCcbm || kind == PolicyKind::kCcbmConstant ||
         kind == PolicyKind::kCcmab;
}

}  // namespace

std::string PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kCcbm: return "ccbm";
    case PolicyKind::kCcbmConstant: return "ccbm-c";
    case PolicyKind::kCcmab: return "ccmab";
    case PolicyKind::kUcb: return "ucb";
    case PolicyKind::kOracle: return "oracle";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  if (name == "ccbm") return PolicyKind::kCcbm;
  if (name == "ccbm-c" || name == "ccbmc") return PolicyKind::kCcbmConstant;
  if (name == "ccmab" || name == "cc-mab") return PolicyKind::kCcmab;
  if (name == "ucb") return PolicyKind::kUcb;
  if (name == "oracle") return PolicyKind::kOracle;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

void SimConfig::Validate() const {
  env.Validate();
  Require(horizon >= 1, "horizon T must be >= 1");
  Require(cell > 0, "cell size must be > 0");
  Require(pred_noise_db >= 0, "pred_noise_db must be >= 0");
  Require(meas_noise_db >= 0, "meas_noise_db must be >= 0");
  Require(step_duration > 0, "step_duration must be > 0");
  Require(bandwidth_hz > 0, "bandwidth_hz must be > 0");
  Require(window.lo_dbm < window.hi_dbm, "norm_lo_dbm must be < norm_hi_dbm");
  Require(candidate_aps >= 1 && candidate_aps <= env.n_aps,
          "candidate_aps A must lie in [1, N]");
  Require(budget >= 1, "budget B must be >= 1");
  Require(budget <= candidate_aps * env.beams_per_ap,
          "budget B must not exceed A*C (candidate_aps * beams_per_ap)");
  Require(buckets >= 0, "buckets h must be >= 1 (or 'theory')");
  Require(load_cap >= 1, "load_cap K must be >= 1");
  Require(t_stop >= 0, "t_stop must be >= 1 (or 'grids')");
  if (IsCcbmFamily(policy)) {
    Require(budget >= 2, "budget B must be >= 2 for CCBM-family policies");
  }
}

int SimConfig::ResolvedBuckets() const {
  return buckets > 0 ? buckets : TheoryBuckets(horizon, env.beams_per_ap);
}

int SimConfig::ResolvedTStop() const {
  return t_stop > 0 ? t_stop : GridSpec(env.bounds, cell).num_grids();
}

CcbmParams SimConfig::ResolvedCcbmParams() const {
  CcbmParams p;
  p.budget = budget;
  p.candidate_aps = candidate_aps;
  p.buckets = ResolvedBuckets();
  p.load_cap = load_cap;
  p.t_stop = ResolvedTStop();
  p.control = control;
  return p;
}

std::unique_ptr<Policy> MakePolicy(const SimConfig& config,
                                   const Environment& env, int num_grids) {
  const int n = env.num_aps();
  const int c = env.beam_count();
  const int m = config.env.n_users;
  CcbmParams params = config.ResolvedCcbmParams();
  switch (config.policy) {
    case PolicyKind::kCcbm:
      return std::make_unique<CcbmPolicy>("ccbm", params, num_grids, n, c, m);
    case PolicyKind::kCcbmConstant:
      params.early_stopping = false;
      return std::make_unique<CcbmPolicy>("ccbm-c", params, num_grids, n, c, m);
    case PolicyKind::kCcmab:
      return std::make_unique<CcbmPolicy>("ccmab", CcmabParams(params),
                                          num_grids, n, c, m);
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(config.budget, num_grids, n, c);
    case PolicyKind::kOracle:
      return std::make_unique<OraclePolicy>(env, config.window, config.budget);
  }
  throw std::invalid_argument("unknown policy kind");
}

double ThroughputBps(double rss_dbm, double bandwidth_hz,
                     double noise_floor_dbm) {
  const double snr = std::pow(10.0, (rss_dbm - noise_floor_dbm) / 10.0);
  return bandwidth_hz * std::log2(1.0 + snr);
}

int LMax(const LoadTable& loads) { return loads.MaxLoad(); }

RunResult RunEpisode(const SimConfig& config, std::uint64_t seed,
                     const RunOptions& options) {
  config.Validate();
  const EnvironmentConfig& ec = config.env;
  Environment env(BuildScene(ec));
  const GridSpec grid_spec(ec.bounds, config.cell);
  const int num_aps = env.num_aps();
  const int beams = env.beam_count();
  const int users = ec.n_users;
  const int cap = config.load_cap;

  std::mt19937_64 env_rng = StreamFor(seed, kEnvStream);
  std::mt19937_64 policy_rng = StreamFor(seed, kPolicyStream);
  std::normal_distribution<double> pred_noise(0.0, 1.0);
  std::normal_distribution<double> meas_noise(0.0, 1.0);

  MobilityState mobility = InitialMobility(ec, env_rng);
  LoadTable loads(num_aps, beams, cap);
  std::unique_ptr<Policy> policy =
      MakePolicy(config, env, grid_spec.num_grids());
  auto* ccbm_policy = dynamic_cast<CcbmPolicy*>(policy.get());

  RunResult result;
  result.policy = policy->name();
  result.seed = seed;
  result.num_users = users;
  result.t_stop = config.ResolvedTStop();
  result.steps.reserve(config.horizon);
  if (options.keep_user_steps) {
    result.user_steps.reserve(static_cast<std::size_t>(config.horizon) * users);
  }
  result.branch_counts.assign(5, 0);

  std::vector<std::optional<ArmId>> connection(users);
  std::vector<double> predicted(num_aps);
  std::vector<double> beam_rss(beams);
  std::vector<int> slot_of(static_cast<std::size_t>(num_aps) * beams, -1);
  std::vector<double> arm_rss;
  std::vector<double> arm_truth;
  std::vector<double> arm_noise;
  std::vector<ProbeOutcome> outcomes;

  double cum_regret = 0.0;
  double cum_oracle = 0.0;
  double cum_policy = 0.0;
  const double approx = 1.0 - 1.0 / std::numbers::e;

  for (int t = 1; t <= config.horizon; ++t) {
    mobility = StepMobility(std::move(mobility), config.step_duration,
                            ec.bounds, env_rng);
    env.SetHumans(mobility.humans, ec.human_radius, ec.human_height,
                  ec.loss_human_db);

    StepMetrics step;
    step.t = t;
    double throughput_sum = 0.0;

    for (int m = 0; m < users; ++m) {
      if (connection[m]) {
        loads.Release(*connection[m]);
        connection[m].reset();
      }
      const Agent& agent = mobility.users[m];
      const Position pos{agent.position.x, agent.position.y, ec.user_height};
      const GridIndex grid = grid_spec.GridOf(pos);

      const Position center = grid_spec.Center(grid, ec.user_height);
      for (int ap = 0; ap < num_aps; ++ap) {
        predicted[ap] = env.BestBeamRssDbm(env.ap(ap), center) +
                        config.pred_noise_db * pred_noise(env_rng);
      }
      const std::vector<ArmId> arms = CandidateArmSetFromPredictions(
          predicted, config.candidate_aps, beams);

      arm_rss.resize(arms.size());
      arm_truth.resize(arms.size());
      arm_noise.resize(arms.size());
      int cached_ap = -1;
      for (std::size_t i = 0; i < arms.size(); ++i) {
        if (arms[i].ap != cached_ap) {
          cached_ap = arms[i].ap;
          env.AllBeamsRssDbm(env.ap(cached_ap), pos, beam_rss);
        }
        arm_rss[i] = beam_rss[arms[i].beam];
        arm_truth[i] = NormalizeReward(arm_rss[i], config.window.lo_dbm,
                                       config.window.hi_dbm);
        arm_noise[i] = config.meas_noise_db * meas_noise(env_rng);
        slot_of[arms[i].Flat(beams)] = static_cast<int>(i);
      }

      StepInput in;
      in.t = t;
      in.user = m;
      in.grid = grid;
      in.grid_id = grid_spec.Flat(grid);
      in.position = pos;
      in.arms = arms;
      in.loads = &loads;

      const std::vector<ArmId> probe = policy->Select(in, policy_rng);
      if (probe.empty()) throw std::logic_error("policy probed no arm");
      if (ccbm_policy != nullptr) {
        result.branch_counts[static_cast<int>(ccbm_policy->last_branch())] +=
            static_cast<int>(probe.size());
      }
      outcomes.clear();
      for (const ArmId& a : probe) {
        const int slot = slot_of[a.Flat(beams)];
        if (slot < 0 || arms[slot] != a) {
          throw std::logic_error("policy probed an arm outside the arm set");
        }
        const double observed =
            NormalizeReward(arm_rss[slot] + arm_noise[slot],
                            config.window.lo_dbm, config.window.hi_dbm);
        outcomes.push_back(
            {a, observed, PenalizedReward(observed, loads.Load(a), cap)});
      }
      const ArmId committed = policy->Commit(in, outcomes);
      const int slot = slot_of[committed.Flat(beams)];

      UserStep row;
      row.t = t;
      row.user = m;
      row.grid = grid;
      row.probes = static_cast<int>(probe.size());
      row.committed = committed;
      row.reward = 0.0;
      for (const ProbeOutcome& o : outcomes) {
        const int i = slot_of[o.arm.Flat(beams)];
        row.reward = std::max(
            row.reward, PenalizedReward(arm_truth[i], loads.Load(o.arm), cap));
      }
      row.oracle_reward = 0.0;
      for (std::size_t i = 0; i < arms.size(); ++i) {
        row.oracle_reward = std::max(
            row.oracle_reward,
            PenalizedReward(arm_truth[i], loads.Load(arms[i]), cap));
      }
      row.throughput_bps = ThroughputBps(arm_rss[slot], config.bandwidth_hz,
                                         config.noise_floor_dbm);
      if (loads.Connect(committed)) {
        connection[m] = committed;
      } else {
        row.overflow = true;
        ++result.overflow_count;
      }
      policy->Update(in, outcomes, committed);

      for (const ArmId& a : arms) slot_of[a.Flat(beams)] = -1;

      step.probes += row.probes;
      step.reward += row.reward;
      step.oracle_reward += row.oracle_reward;
      throughput_sum += row.throughput_bps;
      if (options.keep_user_steps) result.user_steps.push_back(row);
      if (options.load_invariant) {
        int connected = 0;
        for (const auto& c : connection) connected += c.has_value();
        if (!options.load_invariant(loads, connected)) {
          throw std::logic_error("load invariant violated");
        }
      }
    }

    cum_regret += step.oracle_reward - step.reward;
    cum_oracle += step.oracle_reward;
    cum_policy += step.reward;
    step.cum_regret = cum_regret;
    step.cum_approx_regret = approx * cum_oracle - cum_policy;
    step.mean_throughput_bps = throughput_sum / users;
    step.l_max = LMax(loads);
    step.connected = loads.Total();
    result.steps.push_back(step);
  }
  result.state_entries = policy->StateEntries();
  return result;
}

RegretCurves ComputeRegretCurves(std::span<const double> policy_rewards,
                                 std::span<const double> oracle_rewards) {
  if (policy_rewards.size() != oracle_rewards.size()) {
    throw std::invalid_argument("reward series differ in length");
  }
  const double approx = 1.0 - 1.0 / std::numbers::e;
  RegretCurves curves;
  double gap = 0.0;
  double oracle = 0.0;
  double policy = 0.0;
  for (std::size_t i = 0; i < policy_rewards.size(); ++i) {
    gap += oracle_rewards[i] - policy_rewards[i];
    oracle += oracle_rewards[i];
    policy += policy_rewards[i];
    curves.cumulative.push_back(gap);
    curves.approximate.push_back(approx * oracle - policy);
  }
  return curves;
}

RunSummary Summarize(const RunResult& run, int tail_steps) {
  RunSummary s;
  if (run.steps.empty()) return s;
  const int horizon = static_cast<int>(run.steps.size());
  s.final_cum_regret = run.steps.back().cum_regret;
  s.final_cum_approx_regret = run.steps.back().cum_approx_regret;
  s.overflow_count = run.overflow_count;

  const int steady_from = run.t_stop < horizon ? run.t_stop + 1 : 1;
  double reward = 0.0;
  double throughput = 0.0;
  double l_max = 0.0;
  double probes = 0.0;
  int n = 0;
  for (const StepMetrics& st : run.steps) {
    probes += st.probes;
    if (st.t < steady_from) continue;
    reward += st.reward / run.num_users;
    throughput += st.mean_throughput_bps;
    l_max += st.l_max;
    ++n;
  }
  s.steady_reward = reward / n;
  s.steady_throughput_bps = throughput / n;
  s.steady_l_max = l_max / n;
  s.mean_probes_per_step = probes / horizon;

  const int tail = std::min(tail_steps, horizon);
  std::vector<double> series;
  for (int i = horizon - tail; i < horizon; ++i) {
    series.push_back(run.steps[i].mean_throughput_bps);
  }
  const Stat st = MeanStd(series);
  s.tail_throughput_mean = st.mean;
  s.tail_throughput_var = st.std * st.std;
  return s;
}

double LogLogSlope(std::span<const double> cum_regret, int t_from, int t_to) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int t = std::max(1, t_from); t <= t_to; ++t) {
    const double r = cum_regret[t - 1];
    if (!(r > 0.0)) continue;
    const double x = std::log(static_cast<double>(t));
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> SlidingMean(std::span<const double> series, int window) {
  std::vector<double> out(series.size());
  if (series.empty()) return out;
  const int half = std::max(window, 1) / 2;
  const int n = static_cast<int>(series.size());
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series[i];
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n, i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / (hi - lo);
  }
  return out;
}

Stat MeanStd(std::span<const double> values) {
  Stat s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (values.size() - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Sweeps

std::string SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBudget: return "budget";
    case SweepAxis::kPenalty: return "penalty";
    case SweepAxis::kUsers: return "users";
  }
  return "unknown";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "budget") return SweepAxis::kBudget;
  if (name == "penalty") return SweepAxis::kPenalty;
  if (name == "users") return SweepAxis::kUsers;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                              "' (expected budget, penalty or users)");
}

SimConfig WithAxisValue(const SimConfig& base, SweepAxis axis, int value) {
  SimConfig c = base;
  switch (axis) {
    case SweepAxis::kBudget: c.budget = value; break;
    case SweepAxis::kPenalty: c.load_cap = value; break;
    case SweepAxis::kUsers: c.env.n_users = value; break;
  }
  return c;
}

const SweepPoint& SweepResult::At(PolicyKind policy, int value) const {
  for (const SweepPoint& p : points) {
    if (p.policy == policy && p.value == value) return p;
  }
  throw std::out_of_range("no sweep point for that policy/value");
}

SweepResult Sweep(const SimConfig& base, SweepAxis axis,
                  std::span<const int> values,
                  std::span<const std::uint64_t> seeds,
                  std::span<const PolicyKind> policies) {
  if (values.empty()) throw std::invalid_argument("sweep needs values");
  if (seeds.empty()) throw std::invalid_argument("sweep needs seeds");
  if (policies.empty()) throw std::invalid_argument("sweep needs policies");
  SweepResult result;
  result.axis = axis;
  result.values.assign(values.begin(), values.end());
  result.seeds.assign(seeds.begin(), seeds.end());

  std::vector<SimConfig> configs;
  for (PolicyKind p : policies) {
    for (int v : values) {
      SimConfig c = WithAxisValue(base, axis, v);
      c.policy = p;
      c.Validate();
      configs.push_back(c);
      SweepPoint point;
      point.policy = p;
      point.value = v;
      point.runs.resize(seeds.size());
      result.points.push_back(std::move(point));
    }
  }
  const std::size_t jobs = configs.size() * seeds.size();
  RunOptions options;
  options.keep_user_steps = false;
  ParallelFor(jobs, [&](std::size_t j) {
    const std::size_t c = j / seeds.size();
    const std::size_t s = j % seeds.size();
    result.points[c].runs[s] =
        Summarize(RunEpisode(configs[c], seeds[s], options));
  });
  for (SweepPoint& p : result.points) {
    std::vector<double> reward, throughput, l_max, regret;
    for (const RunSummary& r : p.runs) {
      reward.push_back(r.steady_reward);
      throughput.push_back(r.steady_throughput_bps);
      l_max.push_back(r.steady_l_max);
      regret.push_back(r.final_cum_regret);
    }
    p.reward = MeanStd(reward);
    p.throughput_bps = MeanStd(throughput);
    p.l_max = MeanStd(l_max);
    p.cum_regret = MeanStd(regret);
  }
  return result;
}

int WorkerCount() {
  if (const char* env = std::getenv("CCBM_SIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t)>& job) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(WorkerCount()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace ccbm
