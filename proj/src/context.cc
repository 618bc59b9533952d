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

#include "ccbm/context.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccbm {

GridSpec::GridSpec(const Bounds& bounds, double cell) : cell_(cell) {
  if (!(cell > 0.0)) throw std::invalid_argument("grid cell must be > 0");
  nx_ = std::max(1, static_cast<int>(std::ceil(bounds.width / cell - 1e-9)));
  ny_ = std::max(1, static_cast<int>(std::ceil(bounds.depth / cell - 1e-9)));
}

GridIndex GridSpec::GridOf(const Position& pos) const {
  const int gx = static_cast<int>(std::floor(pos.x / cell_));
  const int gy = static_cast<int>(std::floor(pos.y / cell_));
  return {std::clamp(gx, 0, nx_ - 1), std::clamp(gy, 0, ny_ - 1)};
}

Position GridSpec::Center(GridIndex g, double z) const {
  return {(g.gx + 0.5) * cell_, (g.gy + 0.5) * cell_, z};
}

Hypercube HypercubeOf(ArmId arm, int beams_per_ap, int buckets) {
  if (buckets < 1) throw std::invalid_argument("buckets must be >= 1");
  const double direction = ArmDirection(arm, beams_per_ap);
  const int bucket = static_cast<int>(std::floor(direction * buckets));
  return {arm.ap, std::min(bucket, buckets - 1)};
}

int TheoryBuckets(int horizon, int beams_per_ap) {
  const int h = static_cast<int>(std::ceil(std::pow(horizon, 0.25) - 1e-12));
  return std::clamp(h, 1, beams_per_ap);
}

double PredictedLinkQuality(const Environment& env, const GridSpec& grid_spec,
                            int ap, GridIndex grid, double sigma_db,
                            std::mt19937_64& rng) {
  const Position center = grid_spec.Center(grid, env.scene().user_height);
  const double truth = env.BestBeamRssDbm(env.ap(ap), center);
  if (sigma_db <= 0.0) return truth;
  std::normal_distribution<double> noise(0.0, sigma_db);
  return truth + noise(rng);
}

std::vector<ArmId> CandidateArmSetFromPredictions(
    const std::vector<double>& predicted_dbm, int num_candidates,
    int beams_per_ap) {
  const int n = static_cast<int>(predicted_dbm.size());
  if (num_candidates < 1 || num_candidates > n) {
    throw std::invalid_argument("candidate AP count must lie in [1, N]");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return predicted_dbm[a] > predicted_dbm[b];
  });
  order.resize(num_candidates);
  std::sort(order.begin(), order.end());
  std::vector<ArmId> arms;
  arms.reserve(static_cast<std::size_t>(num_candidates) * beams_per_ap);
  for (int ap : order) {
    for (int beam = 0; beam < beams_per_ap; ++beam) arms.push_back({ap, beam});
  }
  return arms;
}

std::vector<ArmId> CandidateArmSet(const Environment& env,
                                   const GridSpec& grid_spec, GridIndex grid,
                                   int num_candidates, double sigma_db,
                                   std::mt19937_64& rng) {
  std::vector<double> predicted(env.num_aps());
  for (int ap = 0; ap < env.num_aps(); ++ap) {
    predicted[ap] =
        PredictedLinkQuality(env, grid_spec, ap, grid, sigma_db, rng);
  }
  return CandidateArmSetFromPredictions(predicted, num_candidates,
                                        env.beam_count());
}

}  // namespace ccbm
