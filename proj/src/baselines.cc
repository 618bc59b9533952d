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

#include "ccbm/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccbm {

std::vector<double> TrueArmRewards(const Environment& env,
                                   const Position& pos,
                                   std::span<const ArmId> arms,
                                   const RewardWindow& window) {
  std::vector<double> rewards(arms.size());
  std::vector<double> rss(env.beam_count());
  int cached_ap = -1;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].ap != cached_ap) {
      cached_ap = arms[i].ap;
      env.AllBeamsRssDbm(env.ap(cached_ap), pos, rss);
    }
    rewards[i] = NormalizeReward(rss[arms[i].beam], window.lo_dbm, window.hi_dbm);
  }
  return rewards;
}

std::vector<ArmId> OracleSelect(const Environment& env, const Position& pos,
                                std::span<const ArmId> arms,
                                const LoadTable& loads, int budget,
                                const RewardWindow& window) {
  std::vector<double> values = TrueArmRewards(env, pos, arms, window);
  for (std::size_t i = 0; i < arms.size(); ++i) {
    values[i] = PenalizedReward(values[i], loads.Load(arms[i]), loads.cap());
  }
  return GreedyProbeSelect(arms, values, budget);
}

OraclePolicy::OraclePolicy(const Environment& env, RewardWindow window,
                           int budget)
    : env_(&env), window_(window), budget_(budget) {
  if (budget < 1) throw std::invalid_argument("budget B must be >= 1");
}

std::vector<ArmId> OraclePolicy::Select(const StepInput& in,
                                        std::mt19937_64& /*rng*/) {
  return OracleSelect(*env_, in.position, in.arms, *in.loads, budget_, window_);
}

ArmId OraclePolicy::Commit(const StepInput& in,
                           std::span<const ProbeOutcome> outcomes) {
  std::vector<ArmId> probed;
  for (const ProbeOutcome& o : outcomes) probed.push_back(o.arm);
  const std::vector<double> truth =
      TrueArmRewards(*env_, in.position, probed, window_);
  std::vector<ProbeOutcome> clean;
  for (std::size_t i = 0; i < probed.size(); ++i) {
    const int k = in.loads->Load(probed[i]);
    clean.push_back(
        {probed[i], truth[i], PenalizedReward(truth[i], k, in.loads->cap())});
  }
  return CommitArmWithOverflow(clean);
}

// ---------------------------------------------------------------------------
// UCB

UcbState::UcbState(int num_grids, int num_aps, int beams_per_ap)
    : num_grids_(num_grids),
      num_aps_(num_aps),
      beams_per_ap_(beams_per_ap),
      visits_(num_grids, 0),
      counts_(static_cast<std::size_t>(num_grids) * num_aps * beams_per_ap, 0),
      means_(counts_.size(), 0.0) {}

std::size_t UcbState::Cell(int grid, ArmId arm) const {
  if (grid < 0 || grid >= num_grids_ || arm.ap < 0 || arm.ap >= num_aps_ ||
      arm.beam < 0 || arm.beam >= beams_per_ap_) {
    throw std::out_of_range("UCB cell index out of range");
  }
  return static_cast<std::size_t>(grid) * num_aps_ * beams_per_ap_ +
         arm.Flat(beams_per_ap_);
}

void UcbState::Observe(int grid, ArmId arm, double reward) {
  const std::size_t c = Cell(grid, arm);
  const double n = counts_[c];
  means_[c] = (means_[c] * n + reward) / (n + 1.0);
  ++counts_[c];
}

void UcbState::Set(int grid, ArmId arm, int count, double mean) {
  const std::size_t c = Cell(grid, arm);
  counts_[c] = count;
  means_[c] = mean;
}

double UcbState::Index(int grid, ArmId arm) const {
  const std::size_t c = Cell(grid, arm);
  if (counts_[c] == 0) return std::numeric_limits<double>::infinity();
  const double n = std::max(1, visits_[grid]);
  return means_[c] + std::sqrt(2.0 * std::log(n) / counts_[c]);
}

std::vector<ArmId> UcbSelect(const UcbState& state, int grid,
                             std::span<const ArmId> arms, int budget) {
  std::vector<std::size_t> order(arms.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> index(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    index[i] = state.Index(grid, arms[i]);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (index[a] != index[b]) return index[a] > index[b];
    return arms[a] < arms[b];
  });
  const std::size_t take =
      std::min(arms.size(), static_cast<std::size_t>(std::max(budget, 0)));
  std::vector<ArmId> chosen;
  for (std::size_t i = 0; i < take; ++i) chosen.push_back(arms[order[i]]);
  return chosen;
}

UcbPolicy::UcbPolicy(int budget, int num_grids, int num_aps, int beams_per_ap)
    : budget_(budget), state_(num_grids, num_aps, beams_per_ap) {
  if (budget < 1) throw std::invalid_argument("budget B must be >= 1");
}

std::vector<ArmId> UcbPolicy::Select(const StepInput& in,
                                     std::mt19937_64& /*rng*/) {
  state_.RecordVisit(in.grid_id);
  return UcbSelect(state_, in.grid_id, in.arms, budget_);
}

void UcbPolicy::Update(const StepInput& in,
                       std::span<const ProbeOutcome> outcomes,
                       ArmId /*committed*/) {
  for (const ProbeOutcome& o : outcomes) {
    state_.Observe(in.grid_id, o.arm, o.penalized_reward);
  }
}

// ---------------------------------------------------------------------------
// CC-MAB

CcbmParams CcmabParams(CcbmParams params) {
  params.attention = false;
  params.early_stopping = false;
  return params;
}

ProbeSelection CcmabSelect(const CcbmState& state, const CcbmParams& params,
                           int user, int grid, std::span<const ArmId> arms,
                           int t, const LoadTable& loads, int beams_per_ap,
                           std::mt19937_64& rng) {
  return SelectProbeSet(state, CcmabParams(params), user, grid, arms, t, loads,
                        beams_per_ap, rng);
}

}  // namespace ccbm
