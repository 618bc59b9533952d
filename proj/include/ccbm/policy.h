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

#ifndef CCBM_POLICY_H_
#define CCBM_POLICY_H_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccbm/bandit.h"
#include "ccbm/context.h"
#include "ccbm/env.h"

namespace ccbm {

// One probed arm: the normalized observation and its load-penalized value.
struct ProbeOutcome {
  ArmId arm;
  double observed_reward = 0.0;
  double penalized_reward = 0.0;
};

// What a policy sees for one user at one step. `position` is only read by
// the clairvoyant oracle; learning policies key everything on the grid.
struct StepInput {
  int t = 1;
  int user = 0;
  GridIndex grid;
  int grid_id = 0;
  Position position;
  std::span<const ArmId> arms;
  const LoadTable* loads = nullptr;
};

// select -> probe -> commit -> update, driven by the episode runner.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  virtual std::vector<ArmId> Select(const StepInput& in,
                                    std::mt19937_64& rng) = 0;

  // Defaults to the best penalized observation (see CommitArm).
  virtual ArmId Commit(const StepInput& in,
                       std::span<const ProbeOutcome> outcomes);

  virtual void Update(const StepInput& in,
                      std::span<const ProbeOutcome> outcomes,
                      ArmId committed) = 0;

  // Number of learned statistics cells, for footprint comparisons.
  virtual std::size_t StateEntries() const = 0;
};

// Argmax of the penalized observed reward, ties to the smaller ArmId.
// Throws std::invalid_argument for an empty probe set.
ArmId CommitArm(std::span<const ProbeOutcome> outcomes);

// CommitArm, except that when every probed arm is worth 0 after the load
// penalty (all saturated or unusable) the best raw observation wins.
ArmId CommitArmWithOverflow(std::span<const ProbeOutcome> outcomes);

}  // namespace ccbm

#endif  // CCBM_POLICY_H_
