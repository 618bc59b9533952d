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

#include "ccbm/ccbm.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "ccbm/baselines.h"
#include "gtest/gtest.h"

namespace ccbm {
namespace {

constexpr int kBeams = 8;

std::vector<ArmId> TwoApArms() {
  std::vector<ArmId> arms;
  for (int ap = 0; ap < 2; ++ap) {
    for (int b = 0; b < kBeams; ++b) arms.push_back({ap, b});
  }
  return arms;
}

CcbmParams Params(int budget, int t_stop = 1600) {
  CcbmParams p;
  p.budget = budget;
  p.candidate_aps = 2;
  p.buckets = 4;
  p.load_cap = 9;
  p.t_stop = t_stop;
  return p;
}

void Saturate(CcbmState& state, int grid, std::span<const ArmId> arms,
              int counter) {
  for (const ArmId& a : arms) {
    state.SetCell(grid, HypercubeOf(a, kBeams, state.buckets()), counter,
                  0.1 * (1 + a.ap * 4 + HypercubeOf(a, kBeams, 4).bucket) / 8.0);
  }
}

bool NoDuplicates(std::vector<ArmId> s) {
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

TEST(ControlFunctionTest, Values) {
  EXPECT_NEAR(ControlFunction(1, ControlMode::kSmooth), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(ControlFunction(1, ControlMode::kLiteral), 0.0);
  EXPECT_NEAR(ControlFunction(16, ControlMode::kSmooth), 4.0 * std::log(17.0), 1e-12);
  EXPECT_NEAR(ControlFunction(16, ControlMode::kSmooth), 11.33, 5e-3);
  EXPECT_THROW(ControlFunction(0, ControlMode::kSmooth), std::invalid_argument);
}

TEST(ControlFunctionTest, StrictlyIncreasing) {
  double smooth = ControlFunction(1, ControlMode::kSmooth);
  double literal = ControlFunction(2, ControlMode::kLiteral);
  for (int n = 2; n <= 1000000; ++n) {
    const double s = ControlFunction(n, ControlMode::kSmooth);
    ASSERT_GT(s, smooth) << n;
    smooth = s;
    if (n >= 3) {
      const double l = ControlFunction(n, ControlMode::kLiteral);
      ASSERT_GT(l, literal) << n;
      literal = l;
    }
  }
}

TEST(ParamsTest, Validation) {
  EXPECT_NO_THROW(Params(8).Validate(4, 8));
  EXPECT_THROW(Params(17).Validate(4, 8), std::invalid_argument);
  EXPECT_THROW(Params(1).Validate(4, 8), std::invalid_argument);
  CcbmParams p = Params(8);
  p.candidate_aps = 5;
  EXPECT_THROW(p.Validate(4, 8), std::invalid_argument);
  EXPECT_EQ(Params(8).ExploitBudget(), 4);
  EXPECT_EQ(Params(5).ExploitBudget(), 3);
}

TEST(UnderExploredTest, FreshStateIsAllUnderExplored) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  EXPECT_EQ(UnderExplored(state, 0, arms, kBeams, ControlMode::kSmooth).size(), 8u);
}

TEST(UnderExploredTest, HandBuiltCounters) {
  CcbmState state(1, 1, 4, 1);
  state.SetVisits(0, 16);
  state.SetCell(0, {0, 0}, 2, 0.1);
  state.SetCell(0, {0, 1}, 0, 0.0);
  state.SetCell(0, {0, 2}, 5, 0.3);
  const std::vector<ArmId> arms = {{0, 0}, {0, 2}, {0, 4}};
  EXPECT_EQ(UnderExplored(state, 0, arms, kBeams, ControlMode::kSmooth).size(), 3u);

  for (int p = 0; p < 3; ++p) state.SetCell(0, {0, p}, 12, 0.1);
  EXPECT_TRUE(UnderExplored(state, 0, arms, kBeams, ControlMode::kSmooth).empty());
}

TEST(ExploitValueTest, PenalizedEstimate) {
  CcbmState state(1, 1, 4, 1);
  LoadTable loads(1, kBeams, 9);
  EXPECT_DOUBLE_EQ(ExploitValue(state, 0, {0, 0}, kBeams, loads), 0.0);
  state.SetCell(0, {0, 0}, 3, 0.8);
  EXPECT_DOUBLE_EQ(ExploitValue(state, 0, {0, 0}, kBeams, loads), 0.8);
  for (int i = 0; i < 3; ++i) loads.Connect({0, 1});
  EXPECT_NEAR(ExploitValue(state, 0, {0, 1}, kBeams, loads), 0.8 * 6.0 / 9.0, 1e-15);
}

TEST(SelectTest, EarlyStopHalvesTheBudgetAndExploits) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  Saturate(state, 0, arms, 0);  // still under-explored, but t > t_stop wins
  LoadTable loads(2, kBeams, 9);
  std::mt19937_64 rng(1);
  const ProbeSelection s =
      SelectProbeSet(state, Params(8, 100), 0, 0, arms, 101, loads, kBeams, rng);
  EXPECT_EQ(s.branch, SelectionBranch::kEarlyStop);
  ASSERT_EQ(s.arms.size(), 4u);
  std::vector<double> values;
  for (const ArmId& a : arms) values.push_back(ExploitValue(state, 0, a, kBeams, loads));
  EXPECT_EQ(s.arms, GreedyProbeSelect(arms, values, 4));
  const ProbeSelection before =
      SelectProbeSet(state, Params(8, 100), 0, 0, arms, 100, loads, kBeams, rng);
  EXPECT_EQ(before.arms.size(), 8u);
}

TEST(SelectTest, SaturatedHypercubesGoGreedy) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  Saturate(state, 0, arms, 100);
  LoadTable loads(2, kBeams, 9);
  std::mt19937_64 rng(1);
  const ProbeSelection s =
      SelectProbeSet(state, Params(3), 0, 0, arms, 5, loads, kBeams, rng);
  EXPECT_EQ(s.branch, SelectionBranch::kExploit);
  std::vector<ArmId> by_value = arms;
  std::stable_sort(by_value.begin(), by_value.end(), [&](ArmId a, ArmId b) {
    return ExploitValue(state, 0, a, kBeams, loads) >
           ExploitValue(state, 0, b, kBeams, loads);
  });
  by_value.resize(3);
  EXPECT_EQ(s.arms, by_value);
}

TEST(SelectTest, FewUnderExploredArmsAreAllTaken) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  Saturate(state, 0, arms, 100);
  state.SetCell(0, {1, 3}, 0, 0.0);  // beams 6 and 7 of AP 1
  LoadTable loads(2, kBeams, 9);
  std::mt19937_64 rng(1);
  const ProbeSelection s =
      SelectProbeSet(state, Params(5), 0, 0, arms, 5, loads, kBeams, rng);
  EXPECT_EQ(s.branch, SelectionBranch::kMixed);
  ASSERT_EQ(s.arms.size(), 5u);
  EXPECT_NE(std::find(s.arms.begin(), s.arms.end(), ArmId{1, 6}), s.arms.end());
  EXPECT_NE(std::find(s.arms.begin(), s.arms.end(), ArmId{1, 7}), s.arms.end());
  EXPECT_TRUE(NoDuplicates(s.arms));
}

TEST(AttentionTest, FreshStateSamplesNeverProbedArms) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  LoadTable loads(2, kBeams, 9);
  std::mt19937_64 rng(2);
  std::set<std::vector<ArmId>> distinct;
  for (int i = 0; i < 50; ++i) {
    const ProbeSelection s =
        SelectProbeSet(state, Params(4), 0, 0, arms, 1, loads, kBeams, rng);
    EXPECT_EQ(s.branch, SelectionBranch::kAttention);
    EXPECT_EQ(s.arms.size(), 4u);
    EXPECT_TRUE(NoDuplicates(s.arms));
    distinct.insert(s.arms);
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(AttentionTest, SingleZeroCounterArmIsAlwaysIncluded) {
  CcbmState state(1, 1, 8, 1);  // one beam per hypercube
  state.SetVisits(0, 100);
  std::vector<ArmId> arms;
  for (int b = 0; b < kBeams; ++b) {
    arms.push_back({0, b});
    state.SetCell(0, {0, b}, b == 5 ? 0 : 1, 0.5);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto s = AttentionBasedSelection(state, 0, 0, arms, arms, 3, kBeams, rng);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_NE(std::find(s.begin(), s.end(), ArmId{0, 5}), s.end());
  }
}

TEST(AttentionTest, LastArmIsAlwaysIncluded) {
  CcbmState state(1, 2, 4, 2);
  state.SetVisits(0, 100);
  const auto arms = TwoApArms();
  for (const ArmId& a : arms) state.SetCell(0, HypercubeOf(a, kBeams, 4), 1, 0.5);
  state.set_last_arm(1, {1, 2});
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto s = AttentionBasedSelection(state, 1, 0, arms, arms, 4, kBeams, rng);
    ASSERT_EQ(s.size(), 4u);
    ASSERT_NE(std::find(s.begin(), s.end(), ArmId{1, 2}), s.end());
  }
  EXPECT_THROW(AttentionBasedSelection(state, 1, 0, std::span(arms).first(2), arms,
                                       4, kBeams, rng),
               std::logic_error);
}

TEST(CcmabTest, UniformBranchAndNoEarlyStop) {
  CcbmState state(1, 2, 4, 1);
  state.RecordVisit(0);
  const auto arms = TwoApArms();
  LoadTable loads(2, kBeams, 9);
  std::mt19937_64 rng(5);
  const ProbeSelection fresh =
      CcmabSelect(state, Params(4, 10), 0, 0, arms, 1, loads, kBeams, rng);
  EXPECT_EQ(fresh.branch, SelectionBranch::kUniform);
  EXPECT_EQ(fresh.arms.size(), 4u);
  const ProbeSelection late =
      CcmabSelect(state, Params(4, 10), 0, 0, arms, 11, loads, kBeams, rng);
  EXPECT_EQ(late.arms.size(), 4u);
  EXPECT_NE(late.branch, SelectionBranch::kEarlyStop);
}

TEST(ObserveTest, IncrementalMean) {
  CcbmState state(1, 1, 4, 1);
  const std::vector<ProbeOutcome> first = {{{0, 0}, 0.2, 0.2}};
  ObserveAndUpdate(state, 0, first, kBeams);
  EXPECT_DOUBLE_EQ(state.estimate(0, {0, 0}), 0.2);
  EXPECT_EQ(state.counter(0, {0, 0}), 1);
  const std::vector<ProbeOutcome> second = {{{0, 1}, 0.8, 0.8}};
  ObserveAndUpdate(state, 0, second, kBeams);
  EXPECT_DOUBLE_EQ(state.estimate(0, {0, 0}), 0.5);
  EXPECT_EQ(state.counter(0, {0, 0}), 2);
}

TEST(ObserveTest, BatchMeanMatchesClosedForm) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    CcbmState state(1, 1, 1, 1);
    const int n = 1 + trial % 200;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = u(rng);
      sum += r;
      state.Observe(0, {0, 0}, r);
    }
    const double batch = sum / n;
    ASSERT_LE(std::abs(state.estimate(0, {0, 0}) - batch), 1e-12 * batch);
  }
}

TEST(StateTest, JsonRoundTripPreservesLearning) {
  CcbmState state(4, 2, 4, 2);
  state.SetVisits(2, 7);
  state.SetCell(2, {1, 3}, 5, 0.625);
  state.set_last_arm(1, {1, 6});
  const CcbmState back = CcbmState::FromJson(state.ToJson());
  EXPECT_EQ(back.visits(2), 7);
  EXPECT_EQ(back.counter(2, {1, 3}), 5);
  EXPECT_DOUBLE_EQ(back.estimate(2, {1, 3}), 0.625);
  EXPECT_EQ(back.last_arm(1), (ArmId{1, 6}));
  EXPECT_FALSE(back.last_arm(0).has_value());
}

}  // namespace
}  // namespace ccbm
