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

#ifndef CCBM_VALIDATE_H_
#define CCBM_VALIDATE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccbm/env.h"

namespace ccbm {

struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string detail;

  bool passed() const { return trials > 0 && failures == 0; }
};

// (reward, load, cap) -> penalized reward. Injectable so a mutated version
// can be fed through the same checks.
using PenaltyFn = std::function<double(double, int, int)>;

struct ValidationOptions {
  std::uint64_t seed = 7;
  int submodularity_trials = 10000;
  int greedy_trials = 10000;
  int los_trials = 10000;
  int mean_trials = 1000;
  PenaltyFn penalty;  // empty selects PenalizedReward
};

// Diminishing returns over random (A subset of B, m outside B) triples.
CheckReport CheckSubmodularity(const ValidationOptions& options);

// Greedy vs exhaustive enumeration (|arms| <= 12, B <= 4): greedy must reach
// the (1 - 1/e) bound and, for the max-form reward, the optimum itself.
CheckReport CheckGreedyBound(const ValidationOptions& options);

// Analytic segment/obstacle blocking vs dense point sampling.
CheckReport CheckLosOracle(const ValidationOptions& options);

// Incremental-mean recursion vs the batch mean, relative error <= 1e-12.
CheckReport CheckIncrementalMean(const ValidationOptions& options);

std::vector<CheckReport> RunValidation(const ValidationOptions& options);

// Sampling oracle: midpoints of `step`-long pieces of a-b, tested against
// the footprint with its own point-inclusion code. Shared with the tests.
bool SampledSegmentBlocked(const Position& a, const Position& b,
                           const Obstacle& obstacle, double step);

}  // namespace ccbm

#endif  // CCBM_VALIDATE_H_
