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

#ifndef CCBM_CONTEXT_H_
#define CCBM_CONTEXT_H_

#include <compare>
#include <random>
#include <vector>

#include "ccbm/env.h"

namespace ccbm {

struct GridIndex {
  int gx = 0;
  int gy = 0;

  auto operator<=>(const GridIndex&) const = default;
};

// Uniform partition of the floor into square cells.
class GridSpec {
 public:
  // Throws std::invalid_argument for a non-positive cell size.
  GridSpec(const Bounds& bounds, double cell);

  double cell() const { return cell_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_grids() const { return nx_ * ny_; }
  int Flat(GridIndex g) const { return g.gy * nx_ + g.gx; }

  // Positions on the far walls fall into the last row/column.
  GridIndex GridOf(const Position& pos) const;
  Position Center(GridIndex g, double z) const;

 private:
  double cell_;
  int nx_;
  int ny_;
};

// One (AP, beam) pair. Ordered lexicographically; that order is the global
// tie-break wherever arms compete.
struct ArmId {
  int ap = 0;
  int beam = 0;

  auto operator<=>(const ArmId&) const = default;

  int Flat(int beams_per_ap) const { return ap * beams_per_ap + beam; }
};

// Beam-center direction normalized to [0, 1).
inline double ArmDirection(ArmId arm, int beams_per_ap) {
  return (arm.beam + 0.5) / beams_per_ap;
}

struct Hypercube {
  int ap = 0;
  int bucket = 0;

  auto operator<=>(const Hypercube&) const = default;

  int Flat(int buckets) const { return ap * buckets + bucket; }
};

// Throws std::invalid_argument for buckets < 1.
Hypercube HypercubeOf(ArmId arm, int beams_per_ap, int buckets);

// Bucket count tied to the horizon, ceil(T^(1/4)) clipped to [1, C].
int TheoryBuckets(int horizon, int beams_per_ap);

// Best-beam RSS at the grid center (user height) plus N(0, sigma) dB.
double PredictedLinkQuality(const Environment& env, const GridSpec& grid_spec,
                            int ap, GridIndex grid, double sigma_db,
                            std::mt19937_64& rng);

// All beams of the top-A APs by predicted link quality, ascending by ArmId.
// Predictions are drawn for every AP in id order; ties keep the lower id.
std::vector<ArmId> CandidateArmSet(const Environment& env,
                                   const GridSpec& grid_spec, GridIndex grid,
                                   int num_candidates, double sigma_db,
                                   std::mt19937_64& rng);

// Same ranking from already-drawn predictions, one per AP.
std::vector<ArmId> CandidateArmSetFromPredictions(
    const std::vector<double>& predicted_dbm, int num_candidates,
    int beams_per_ap);

}  // namespace ccbm

#endif  // CCBM_CONTEXT_H_
