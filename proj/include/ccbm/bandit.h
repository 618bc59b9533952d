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

#ifndef CCBM_BANDIT_H_
#define CCBM_BANDIT_H_

// Submodular probing reward and the greedy probe selection built on it.
//
// The reward of probing a set S is the best load-penalized reward inside S,
//   R(S) = max_{a in S} ((K - k_a) / K) * r_a,
// which is monotone submodular. Greedy marginal-gain selection is
// (1 - 1/e)-optimal for any monotone submodular R and exact for this max form.

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ccbm/context.h"

namespace ccbm {

// ((K - k) / K) * r. Throws std::invalid_argument unless 0 <= r <= 1,
// 0 <= k <= K and K >= 1.
double PenalizedReward(double reward, int load, int cap);

// Connections per beam with a per-beam cap K.
class LoadTable {
 public:
  LoadTable(int num_aps, int beams_per_ap, int cap);

  int cap() const { return cap_; }
  int beams_per_ap() const { return beams_per_ap_; }
  int Load(ArmId arm) const { return k_.at(arm.Flat(beams_per_ap_)); }

  // Adds one connection. Returns false, leaving the table untouched, if the
  // beam is already at the cap.
  bool Connect(ArmId arm);
  // Throws std::logic_error if the beam has no connection to release.
  void Release(ArmId arm);

  int Total() const { return total_; }
  // L_max: the largest per-beam load, 0 for an empty network.
  int MaxLoad() const;

 private:
  int beams_per_ap_;
  int cap_;
  std::vector<int> k_;
  int total_ = 0;
};

using ArmRewards = std::map<ArmId, double>;

// Max-form reward of probing `arms`; empty set is 0. Throws
// std::invalid_argument if an arm has no reward.
double SubsetReward(std::span<const ArmId> arms, const ArmRewards& rewards,
                    const LoadTable& loads);

// Any set function over arms; used for the generic greedy and its oracle.
using SetFunction = std::function<double(std::span<const ArmId>)>;

// Max of per-arm values (already penalized) over a set; 0 for the empty set.
SetFunction MaxFormReward(std::span<const ArmId> arms,
                          std::span<const double> values);

// Greedy marginal-gain maximization of f under |S| <= budget. Marginal gain
// ties go to the larger singleton value, then to the smaller ArmId, so the
// result is a total function of the inputs. Always returns
// min(budget, |arms|) arms in pick order.
std::vector<ArmId> GreedyMaximize(std::span<const ArmId> arms,
                                  const SetFunction& f, int budget);

// Greedy probing over per-arm values (values[i] belongs to arms[i]) under the
// max-form reward. Equivalent to GreedyMaximize(arms, MaxFormReward(...)),
// i.e. descending value with ArmId tie-break, in O(B * |arms|).
std::vector<ArmId> GreedyProbeSelect(std::span<const ArmId> arms,
                                     std::span<const double> values,
                                     int budget);

struct OptimalSubset {
  std::vector<ArmId> arms;
  double value = 0.0;
};

inline constexpr int kBruteForceMaxArms = 20;

// Exhaustive search over every subset of size <= budget. Throws
// std::invalid_argument for more than kBruteForceMaxArms arms.
OptimalSubset BruteForceOptimalSubset(std::span<const ArmId> arms,
                                      const SetFunction& f, int budget);

// f(A + m) - f(A) >= f(B + m) - f(B). Throws std::invalid_argument unless
// A is a subset of B and m is not in B.
bool CheckDiminishingReturns(std::span<const ArmId> a_set,
                             std::span<const ArmId> b_set, ArmId m,
                             const SetFunction& f);

}  // namespace ccbm

#endif  // CCBM_BANDIT_H_
