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

#include "ccbm/validate.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <variant>

#include "ccbm/bandit.h"
#include "ccbm/ccbm.h"
#include "ccbm/context.h"

namespace ccbm {
namespace {

PenaltyFn ResolvePenalty(const ValidationOptions& options) {
  if (options.penalty) return options.penalty;
  return [](double r, int k, int cap) { return PenalizedReward(r, k, cap); };
}

std::vector<ArmId> MakeArms(int n) {
  std::vector<ArmId> arms;
  for (int i = 0; i < n; ++i) arms.push_back({i / 8, i % 8});
  return arms;
}

// Penalized values for random rewards and loads.
std::vector<double> RandomValues(int n, const PenaltyFn& penalty,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> reward(0.0, 1.0);
  const int cap = std::uniform_int_distribution<int>(1, 15)(rng);
  std::uniform_int_distribution<int> load(0, cap);
  std::vector<double> values(n);
  for (double& v : values) {
    const double r = reward(rng);
    v = penalty(r, load(rng), cap);
  }
  return values;
}

// Crossing-number test; does not assume convexity.
bool OracleInPolygon(Point2 p, const std::vector<Point2>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x =
          v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool OracleInFootprint(Point2 p, const Footprint& f) {
  if (const auto* disc = std::get_if<Disc>(&f)) {
    const double dx = p.x - disc->center.x;
    const double dy = p.y - disc->center.y;
    return dx * dx + dy * dy < disc->radius * disc->radius;
  }
  return OracleInPolygon(p, std::get<Polygon>(f).vertices);
}

Obstacle RandomObstacle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point2 c{5.0 + 10.0 * unit(rng), 5.0 + 10.0 * unit(rng)};
  const double height = 0.5 + 2.0 * unit(rng);
  if (unit(rng) < 0.5) {
    return Obstacle::Human(c, 0.1 + 0.5 * unit(rng), height, 15.0);
  }
  const double w = 0.3 + 1.7 * unit(rng);
  const double d = 0.3 + 1.7 * unit(rng);
  const double a = 2.0 * std::numbers::pi * unit(rng);
  const double ca = std::cos(a), sa = std::sin(a);
  Polygon poly;
  const double corners[4][2] = {{-w / 2, -d / 2}, {w / 2, -d / 2},
                                {w / 2, d / 2}, {-w / 2, d / 2}};
  for (const auto& k : corners) {
    poly.vertices.push_back(
        {c.x + ca * k[0] - sa * k[1], c.y + sa * k[0] + ca * k[1]});
  }
  return Obstacle{poly, height, 10.0, ObstacleKind::kStatic};
}

Point2 FootprintCenter(const Footprint& f) {
  if (const auto* disc = std::get_if<Disc>(&f)) return disc->center;
  Point2 c;
  const auto& v = std::get<Polygon>(f).vertices;
  for (const Point2& p : v) {
    c.x += p.x / v.size();
    c.y += p.y / v.size();
  }
  return c;
}

std::string Summary(int trials, int failures) {
  std::ostringstream s;
  s << trials << " trials, " << failures << " violations";
  return s.str();
}

}  // namespace

bool SampledSegmentBlocked(const Position& a, const Position& b,
                           const Obstacle& obstacle, double step) {
  const double length = Distance3d(a, b);
  const int pieces = std::max(1, static_cast<int>(std::ceil(length / step)));
  for (int i = 0; i < pieces; ++i) {
    const double s = (i + 0.5) / pieces;
    const Position p{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y),
                     a.z + s * (b.z - a.z)};
    if (p.z <= obstacle.height && OracleInFootprint({p.x, p.y}, obstacle.footprint)) {
      return true;
    }
  }
  return false;
}

CheckReport CheckSubmodularity(const ValidationOptions& options) {
  CheckReport report{"submodularity", 0, 0, {}};
  const PenaltyFn penalty = ResolvePenalty(options);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < options.submodularity_trials; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const std::vector<ArmId> arms = MakeArms(n);
    const std::vector<double> values = RandomValues(n, penalty, rng);
    const SetFunction f = MaxFormReward(arms, values);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const ArmId m = arms[order[0]];
    std::vector<ArmId> b_set;
    std::vector<ArmId> a_set;
    for (int i = 1; i < n; ++i) {
      if (unit(rng) < 0.5) continue;
      b_set.push_back(arms[order[i]]);
      if (unit(rng) < 0.5) a_set.push_back(arms[order[i]]);
    }
    ++report.trials;
    if (!CheckDiminishingReturns(a_set, b_set, m, f)) ++report.failures;
  }
  report.detail = Summary(report.trials, report.failures);
  return report;
}

CheckReport CheckGreedyBound(const ValidationOptions& options) {
  CheckReport report{"greedy_bound", 0, 0, {}};
  const PenaltyFn penalty = ResolvePenalty(options);
  const double ratio = 1.0 - 1.0 / std::numbers::e;
  std::mt19937_64 rng(options.seed + 1);
  int below_bound = 0;
  int not_optimal = 0;
  for (int trial = 0; trial < options.greedy_trials; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const int budget = std::uniform_int_distribution<int>(1, 4)(rng);
    const std::vector<ArmId> arms = MakeArms(n);
    const std::vector<double> values = RandomValues(n, penalty, rng);
    const SetFunction f = MaxFormReward(arms, values);

    const double greedy = f(GreedyMaximize(arms, f, budget));
    const double fast = f(GreedyProbeSelect(arms, values, budget));
    const double best = BruteForceOptimalSubset(arms, f, budget).value;
    ++report.trials;
    bool ok = true;
    if (greedy < ratio * best || fast < ratio * best) {
      ++below_bound;
      ok = false;
    }
    if (greedy != best || fast != best) {
      ++not_optimal;
      ok = false;
    }
    if (!ok) ++report.failures;
  }
  std::ostringstream s;
  s << Summary(report.trials, report.failures) << " (" << below_bound
    << " below (1-1/e), " << not_optimal << " short of the optimum)";
  report.detail = s.str();
  return report;
}

CheckReport CheckLosOracle(const ValidationOptions& options) {
  CheckReport report{"los_oracle", 0, 0, {}};
  constexpr double kStep = 2e-4;
  std::mt19937_64 rng(options.seed + 2);
  std::uniform_real_distribution<double> offset(-3.0, 3.0);
  std::uniform_real_distribution<double> z(0.0, 3.0);
  int blocked = 0;
  for (int trial = 0; trial < options.los_trials; ++trial) {
    const Obstacle obstacle = RandomObstacle(rng);
    const Point2 c = FootprintCenter(obstacle.footprint);
    const Position a{c.x + offset(rng), c.y + offset(rng), z(rng)};
    const Position b{c.x + offset(rng), c.y + offset(rng), z(rng)};
    const bool analytic = SegmentBlocked(a, b, obstacle);
    const bool sampled = SampledSegmentBlocked(a, b, obstacle, kStep);
    blocked += analytic;
    ++report.trials;
    if (analytic != sampled) ++report.failures;
  }
  std::ostringstream s;
  s << Summary(report.trials, report.failures) << " (" << blocked
    << " blocked)";
  report.detail = s.str();
  return report;
}

CheckReport CheckIncrementalMean(const ValidationOptions& options) {
  CheckReport report{"incremental_mean", 0, 0, {}};
  std::mt19937_64 rng(options.seed + 3);
  std::uniform_real_distribution<double> reward(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < options.mean_trials; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 500)(rng);
    CcbmState state(1, 1, 1, 1);
    const Hypercube cell{0, 0};
    std::vector<double> xs(n);
    for (double& x : xs) {
      x = reward(rng);
      state.Observe(0, cell, x);
    }
    const double batch = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double rel =
        std::abs(state.estimate(0, cell) - batch) / std::max(batch, 1e-300);
    worst = std::max(worst, rel);
    ++report.trials;
    if (rel > 1e-12 || state.counter(0, cell) != n) ++report.failures;
  }
  std::ostringstream s;
  s << Summary(report.trials, report.failures) << " (max rel err " << worst
    << ")";
  report.detail = s.str();
  return report;
}

std::vector<CheckReport> RunValidation(const ValidationOptions& options) {
  return {CheckSubmodularity(options), CheckGreedyBound(options),
          CheckLosOracle(options), CheckIncrementalMean(options)};
}

}  // namespace ccbm
