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

#include "ccbm/bandit.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ccbm {

double PenalizedReward(double reward, int load, int cap) {
  if (cap < 1) throw std::invalid_argument("load cap K must be >= 1");
  if (load < 0 || load > cap) {
    throw std::invalid_argument("beam load must lie in [0, K]");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("reward must lie in [0, 1]");
  }
  return static_cast<double>(cap - load) / cap * reward;
}

LoadTable::LoadTable(int num_aps, int beams_per_ap, int cap)
    : beams_per_ap_(beams_per_ap),
      cap_(cap),
      k_(static_cast<std::size_t>(num_aps) * beams_per_ap, 0) {
  if (cap < 1) throw std::invalid_argument("load cap K must be >= 1");
}

bool LoadTable::Connect(ArmId arm) {
  int& k = k_.at(arm.Flat(beams_per_ap_));
  if (k >= cap_) return false;
  ++k;
  ++total_;
  return true;
}

void LoadTable::Release(ArmId arm) {
  int& k = k_.at(arm.Flat(beams_per_ap_));
  if (k == 0) throw std::logic_error("release on a beam with no connection");
  --k;
  --total_;
}

int LoadTable::MaxLoad() const {
  return k_.empty() ? 0 : *std::max_element(k_.begin(), k_.end());
}

double SubsetReward(std::span<const ArmId> arms, const ArmRewards& rewards,
                    const LoadTable& loads) {
  double best = 0.0;
  for (const ArmId& a : arms) {
    const auto it = rewards.find(a);
    if (it == rewards.end()) {
      throw std::invalid_argument("no reward for a probed arm");
    }
    best = std::max(best, PenalizedReward(it->second, loads.Load(a), loads.cap()));
  }
  return best;
}

SetFunction MaxFormReward(std::span<const ArmId> arms,
                          std::span<const double> values) {
  ArmRewards table;
  for (std::size_t i = 0; i < arms.size(); ++i) table[arms[i]] = values[i];
  return [table = std::move(table)](std::span<const ArmId> s) {
    if (s.empty()) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const ArmId& a : s) best = std::max(best, table.at(a));
    return best;
  };
}

std::vector<ArmId> GreedyMaximize(std::span<const ArmId> arms,
                                  const SetFunction& f, int budget) {
  std::vector<ArmId> chosen;
  std::vector<bool> used(arms.size(), false);
  std::vector<double> singleton(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const ArmId one[] = {arms[i]};
    singleton[i] = f(one);
  }
  const std::size_t target =
      std::min(arms.size(), static_cast<std::size_t>(std::max(budget, 0)));
  double current = f(chosen);
  while (chosen.size() < target) {
    std::size_t best = arms.size();
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms.size(); ++i) {
      if (used[i]) continue;
      chosen.push_back(arms[i]);
      const double gain = f(chosen) - current;
      chosen.pop_back();
      const bool better =
          best == arms.size() || gain > best_gain ||
          (gain == best_gain &&
           (singleton[i] > singleton[best] ||
            (singleton[i] == singleton[best] && arms[i] < arms[best])));
      if (better) {
        best = i;
        best_gain = gain;
      }
    }
    used[best] = true;
    chosen.push_back(arms[best]);
    current += best_gain;
  }
  return chosen;
}

std::vector<ArmId> GreedyProbeSelect(std::span<const ArmId> arms,
                                     std::span<const double> values,
                                     int budget) {
  if (values.size() != arms.size()) {
    throw std::invalid_argument("one value per arm required");
  }
  const std::size_t target =
      std::min(arms.size(), static_cast<std::size_t>(std::max(budget, 0)));
  std::vector<ArmId> chosen;
  chosen.reserve(target);
  std::vector<bool> used(arms.size(), false);
  double current = 0.0;
  while (chosen.size() < target) {
    std::size_t best = arms.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
      if (used[i]) continue;
      const double gain = std::max(values[i], current) - current;
      const bool better =
          best == arms.size() || gain > best_gain ||
          (gain == best_gain &&
           (values[i] > values[best] ||
            (values[i] == values[best] && arms[i] < arms[best])));
      if (better) {
        best = i;
        best_gain = gain;
      }
    }
    used[best] = true;
    chosen.push_back(arms[best]);
    current = std::max(current, values[best]);
  }
  return chosen;
}

OptimalSubset BruteForceOptimalSubset(std::span<const ArmId> arms,
                                      const SetFunction& f, int budget) {
  if (arms.size() > static_cast<std::size_t>(kBruteForceMaxArms)) {
    throw std::invalid_argument("brute force refuses more than 20 arms");
  }
  const int n = static_cast<int>(arms.size());
  OptimalSubset best;
  best.value = f(best.arms);
  std::vector<ArmId> subset;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > budget) continue;
    subset.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset.push_back(arms[i]);
    }
    const double v = f(subset);
    if (v > best.value) {
      best.value = v;
      best.arms = subset;
    }
  }
  return best;
}

bool CheckDiminishingReturns(std::span<const ArmId> a_set,
                             std::span<const ArmId> b_set, ArmId m,
                             const SetFunction& f) {
  auto contains = [](std::span<const ArmId> s, ArmId x) {
    return std::find(s.begin(), s.end(), x) != s.end();
  };
  for (const ArmId& a : a_set) {
    if (!contains(b_set, a)) {
      throw std::invalid_argument("A must be a subset of B");
    }
  }
  if (contains(b_set, m)) throw std::invalid_argument("m must lie outside B");
  std::vector<ArmId> a_plus(a_set.begin(), a_set.end());
  a_plus.push_back(m);
  std::vector<ArmId> b_plus(b_set.begin(), b_set.end());
  b_plus.push_back(m);
  return f(a_plus) - f(a_set) >= f(b_plus) - f(b_set);
}

}  // namespace ccbm
