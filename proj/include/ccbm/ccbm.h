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

#ifndef CCBM_CCBM_H_
#define CCBM_CCBM_H_

// Contextual combinatorial beam management.
//
// Statistics live per (grid, hypercube): a counter of probes and the running
// mean of the penalized rewards they returned. Each user visit increments the
// grid's visit count n_x and then picks a probe set:
//
//   t > t_stop                  exploit with ceil(B/2) probes
//   no under-explored cube      exploit with B probes
//   q < B under-explored arms   all q arms + (B - q) exploit picks
//   otherwise                   attention-based selection
//
// Exploitation is greedy marginal gain over penalized estimates.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccbm/bandit.h"
#include "ccbm/context.h"
#include "ccbm/policy.h"
#include "json.hpp"

namespace ccbm {

enum class ControlMode {
  kSmooth,   // sqrt(n) * ln(1 + n)
  kLiteral,  // sqrt(n) * ln(n)
};

// Exploration threshold K(n_x). Throws std::invalid_argument for n < 1.
double ControlFunction(int n, ControlMode mode);

struct CcbmParams {
  int budget = 8;
  int candidate_aps = 2;
  int buckets = 4;
  int load_cap = 9;
  int t_stop = 1600;
  ControlMode control = ControlMode::kSmooth;
  // Off: exploration samples under-explored arms uniformly (CC-MAB).
  bool attention = true;
  // Off: full budget at every step and no pure-exploitation phase.
  bool early_stopping = true;

  // Throws std::invalid_argument naming the violated constraint.
  void Validate(int num_aps, int beams_per_ap) const;
  int ExploitBudget() const { return (budget + 1) / 2; }
};

class CcbmState {
 public:
  CcbmState(int num_grids, int num_aps, int buckets, int num_users);

  int num_grids() const { return num_grids_; }
  int num_aps() const { return num_aps_; }
  int buckets() const { return buckets_; }
  int num_users() const { return static_cast<int>(last_arm_.size()); }

  int visits(int grid) const { return visits_.at(grid); }
  void RecordVisit(int grid) { ++visits_.at(grid); }

  int counter(int grid, Hypercube p) const { return counters_.at(Cell(grid, p)); }
  double estimate(int grid, Hypercube p) const {
    return estimates_.at(Cell(grid, p));
  }
  // Incremental mean: r_hat <- (r_hat * C + r) / (C + 1), then C += 1.
  void Observe(int grid, Hypercube p, double penalized_reward);

  std::optional<ArmId> last_arm(int user) const { return last_arm_.at(user); }
  void set_last_arm(int user, ArmId arm) { last_arm_.at(user) = arm; }

  std::size_t entries() const { return counters_.size(); }

  // Sparse snapshot; schema "ccbm-state/1" (see README).
  nlohmann::json ToJson() const;
  static CcbmState FromJson(const nlohmann::json& j);

  // Test hook for hand-built states.
  void SetCell(int grid, Hypercube p, int counter, double estimate);
  void SetVisits(int grid, int n) { visits_.at(grid) = n; }

 private:
  std::size_t Cell(int grid, Hypercube p) const;

  int num_grids_;
  int num_aps_;
  int buckets_;
  std::vector<int> visits_;
  std::vector<int> counters_;
  std::vector<double> estimates_;
  std::vector<std::optional<ArmId>> last_arm_;
};

// Hypercubes of `arms` whose counter at `grid` is below K(n_x), ascending.
std::vector<Hypercube> UnderExplored(const CcbmState& state, int grid,
                                     std::span<const ArmId> arms,
                                     int beams_per_ap, ControlMode mode);

// Penalized estimate of the arm's hypercube; unvisited cells read 0.
double ExploitValue(const CcbmState& state, int grid, ArmId arm,
                    int beams_per_ap, const LoadTable& loads);

enum class SelectionBranch { kEarlyStop, kExploit, kMixed, kAttention, kUniform };

struct ProbeSelection {
  std::vector<ArmId> arms;
  SelectionBranch branch = SelectionBranch::kExploit;
};

// Probe-set choice for one user visit. Expects the visit to be recorded.
ProbeSelection SelectProbeSet(const CcbmState& state, const CcbmParams& params,
                              int user, int grid, std::span<const ArmId> arms,
                              int t, const LoadTable& loads,
                              int beams_per_ap, std::mt19937_64& rng);

// Exploration that favors never-probed hypercubes (Z) and otherwise keeps
// the user's previous arm in the set. Throws std::logic_error if fewer than
// `budget` under-explored arms are passed in.
std::vector<ArmId> AttentionBasedSelection(
    const CcbmState& state, int user, int grid,
    std::span<const ArmId> under_explored_arms, std::span<const ArmId> arms,
    int budget, int beams_per_ap, std::mt19937_64& rng);

// Applies outcomes in probe order.
void ObserveAndUpdate(CcbmState& state, int grid,
                      std::span<const ProbeOutcome> outcomes,
                      int beams_per_ap);

class CcbmPolicy : public Policy {
 public:
  CcbmPolicy(std::string name, CcbmParams params, int num_grids, int num_aps,
             int beams_per_ap, int num_users);

  std::string name() const override { return name_; }
  std::vector<ArmId> Select(const StepInput& in, std::mt19937_64& rng) override;
  void Update(const StepInput& in, std::span<const ProbeOutcome> outcomes,
              ArmId committed) override;
  std::size_t StateEntries() const override { return state_.entries(); }

  const CcbmState& state() const { return state_; }
  const CcbmParams& params() const { return params_; }
  SelectionBranch last_branch() const { return last_branch_; }

 private:
  std::string name_;
  CcbmParams params_;
  int beams_per_ap_;
  CcbmState state_;
  SelectionBranch last_branch_ = SelectionBranch::kExploit;
};

}  // namespace ccbm

#endif  // CCBM_CCBM_H_
