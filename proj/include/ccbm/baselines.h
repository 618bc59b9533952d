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

#ifndef CCBM_BASELINES_H_
#define CCBM_BASELINES_H_

#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccbm/bandit.h"
#include "ccbm/ccbm.h"
#include "ccbm/context.h"
#include "ccbm/env.h"
#include "ccbm/policy.h"

namespace ccbm {

struct RewardWindow {
  double lo_dbm = -100.0;
  double hi_dbm = -30.0;
};

// Noise-free normalized reward of every arm at the user's exact position
// under the current obstacle configuration.
std::vector<double> TrueArmRewards(const Environment& env,
                                   const Position& pos,
                                   std::span<const ArmId> arms,
                                   const RewardWindow& window);

// Greedy probing on the true penalized rewards.
std::vector<ArmId> OracleSelect(const Environment& env, const Position& pos,
                                std::span<const ArmId> arms,
                                const LoadTable& loads, int budget,
                                const RewardWindow& window);

// Clairvoyant reference. Probes like everyone else but ranks and commits on
// ground truth, so measurement noise never reaches it.
class OraclePolicy : public Policy {
 public:
  OraclePolicy(const Environment& env, RewardWindow window, int budget);

  std::string name() const override { return "oracle"; }
  std::vector<ArmId> Select(const StepInput& in, std::mt19937_64& rng) override;
  ArmId Commit(const StepInput& in,
               std::span<const ProbeOutcome> outcomes) override;
  void Update(const StepInput&, std::span<const ProbeOutcome>, ArmId) override {}
  std::size_t StateEntries() const override { return 0; }

 private:
  const Environment* env_;
  RewardWindow window_;
  int budget_;
};

// Per-(grid, arm) statistics for the UCB baseline.
class UcbState {
 public:
  UcbState(int num_grids, int num_aps, int beams_per_ap);

  int visits(int grid) const { return visits_.at(grid); }
  void RecordVisit(int grid) { ++visits_.at(grid); }
  void SetVisits(int grid, int n) { visits_.at(grid) = n; }
  int count(int grid, ArmId arm) const { return counts_.at(Cell(grid, arm)); }
  double mean(int grid, ArmId arm) const { return means_.at(Cell(grid, arm)); }
  void Observe(int grid, ArmId arm, double reward);
  void Set(int grid, ArmId arm, int count, double mean);
  std::size_t entries() const { return counts_.size(); }

  // mean + sqrt(2 ln(n_x) / count); +inf for an unprobed arm.
  double Index(int grid, ArmId arm) const;

 private:
  std::size_t Cell(int grid, ArmId arm) const;

  int num_grids_;
  int num_aps_;
  int beams_per_ap_;
  std::vector<int> visits_;
  std::vector<int> counts_;
  std::vector<double> means_;
};

// Top-`budget` arms by UCB index, ties to the smaller ArmId.
std::vector<ArmId> UcbSelect(const UcbState& state, int grid,
                             std::span<const ArmId> arms, int budget);

class UcbPolicy : public Policy {
 public:
  UcbPolicy(int budget, int num_grids, int num_aps, int beams_per_ap);

  std::string name() const override { return "ucb"; }
  std::vector<ArmId> Select(const StepInput& in, std::mt19937_64& rng) override;
  void Update(const StepInput& in, std::span<const ProbeOutcome> outcomes,
              ArmId committed) override;
  std::size_t StateEntries() const override { return state_.entries(); }

  const UcbState& state() const { return state_; }

 private:
  int budget_;
  UcbState state_;
};

// CC-MAB: CCBM's selection with uniform exploration and no early stop.
CcbmParams CcmabParams(CcbmParams params);

ProbeSelection CcmabSelect(const CcbmState& state, const CcbmParams& params,
                           int user, int grid, std::span<const ArmId> arms,
                           int t, const LoadTable& loads, int beams_per_ap,
                           std::mt19937_64& rng);

}  // namespace ccbm

#endif  // CCBM_BASELINES_H_
