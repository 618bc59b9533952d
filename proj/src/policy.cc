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

#include "ccbm/policy.h"

#include <algorithm>
#include <stdexcept>

namespace ccbm {

ArmId Policy::Commit(const StepInput& /*in*/,
                     std::span<const ProbeOutcome> outcomes) {
  return CommitArmWithOverflow(outcomes);
}

ArmId CommitArm(std::span<const ProbeOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("commit needs a probe");
  const ProbeOutcome* best = &outcomes.front();
  for (const ProbeOutcome& o : outcomes) {
    if (o.penalized_reward > best->penalized_reward ||
        (o.penalized_reward == best->penalized_reward && o.arm < best->arm)) {
      best = &o;
    }
  }
  return best->arm;
}

ArmId CommitArmWithOverflow(std::span<const ProbeOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("commit needs a probe");
  const bool all_zero =
      std::all_of(outcomes.begin(), outcomes.end(),
                  [](const ProbeOutcome& o) { return o.penalized_reward <= 0.0; });
  if (!all_zero) return CommitArm(outcomes);
  const ProbeOutcome* best = &outcomes.front();
  for (const ProbeOutcome& o : outcomes) {
    if (o.observed_reward > best->observed_reward ||
        (o.observed_reward == best->observed_reward && o.arm < best->arm)) {
      best = &o;
    }
  }
  return best->arm;
}

}  // namespace ccbm
