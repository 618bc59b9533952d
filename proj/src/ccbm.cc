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
#include <iterator>
#include <stdexcept>
#include <utility>

namespace ccbm {

double ControlFunction(int n, ControlMode mode) {
  if (n < 1) throw std::invalid_argument("control function needs n_x >= 1");
  const double root = std::sqrt(static_cast<double>(n));
  return mode == ControlMode::kSmooth ? root * std::log1p(static_cast<double>(n))
                                      : root * std::log(static_cast<double>(n));
}

void CcbmParams::Validate(int num_aps, int beams_per_ap) const {
  if (budget < 2) throw std::invalid_argument("budget B must be >= 2");
  if (candidate_aps < 1 || candidate_aps > num_aps) {
    throw std::invalid_argument("candidate APs A must lie in [1, N]");
  }
  if (budget > candidate_aps * beams_per_ap) {
    throw std::invalid_argument("budget B must not exceed A*C");
  }
  if (buckets < 1) throw std::invalid_argument("buckets h must be >= 1");
  if (load_cap < 1) throw std::invalid_argument("load cap K must be >= 1");
  if (t_stop < 1) throw std::invalid_argument("t_stop must be >= 1");
}

// ---------------------------------------------------------------------------
// CcbmState

CcbmState::CcbmState(int num_grids, int num_aps, int buckets, int num_users)
    : num_grids_(num_grids),
      num_aps_(num_aps),
      buckets_(buckets),
      visits_(num_grids, 0),
      counters_(static_cast<std::size_t>(num_grids) * num_aps * buckets, 0),
      estimates_(counters_.size(), 0.0),
      last_arm_(num_users) {
  if (num_grids < 1 || num_aps < 1 || buckets < 1 || num_users < 0) {
    throw std::invalid_argument("bad CCBM state dimensions");
  }
}

std::size_t CcbmState::Cell(int grid, Hypercube p) const {
  if (grid < 0 || grid >= num_grids_ || p.ap < 0 || p.ap >= num_aps_ ||
      p.bucket < 0 || p.bucket >= buckets_) {
    throw std::out_of_range("CCBM cell index out of range");
  }
  return static_cast<std::size_t>(grid) * num_aps_ * buckets_ +
         p.Flat(buckets_);
}

void CcbmState::Observe(int grid, Hypercube p, double penalized_reward) {
  const std::size_t c = Cell(grid, p);
  const double n = counters_[c];
  estimates_[c] = (estimates_[c] * n + penalized_reward) / (n + 1.0);
  ++counters_[c];
}

void CcbmState::SetCell(int grid, Hypercube p, int counter, double estimate) {
  const std::size_t c = Cell(grid, p);
  counters_[c] = counter;
  estimates_[c] = estimate;
}

nlohmann::json CcbmState::ToJson() const {
  nlohmann::json j;
  j["schema"] = "ccbm-state/1";
  j["num_grids"] = num_grids_;
  j["num_aps"] = num_aps_;
  j["buckets"] = buckets_;
  j["num_users"] = last_arm_.size();
  auto visits = nlohmann::json::array();
  for (int g = 0; g < num_grids_; ++g) {
    if (visits_[g] != 0) visits.push_back({g, visits_[g]});
  }
  j["visits"] = std::move(visits);
  auto cells = nlohmann::json::array();
  for (int g = 0; g < num_grids_; ++g) {
    for (int ap = 0; ap < num_aps_; ++ap) {
      for (int b = 0; b < buckets_; ++b) {
        const std::size_t c = Cell(g, {ap, b});
        if (counters_[c] != 0) {
          cells.push_back({g, ap, b, counters_[c], estimates_[c]});
        }
      }
    }
  }
  j["cells"] = std::move(cells);
  auto last = nlohmann::json::array();
  for (const auto& a : last_arm_) {
    if (a) {
      last.push_back({a->ap, a->beam});
    } else {
      last.push_back(nullptr);
    }
  }
  j["last_arm"] = std::move(last);
  return j;
}

CcbmState CcbmState::FromJson(const nlohmann::json& j) {
  if (j.at("schema") != "ccbm-state/1") {
    throw std::invalid_argument("unsupported CCBM state schema");
  }
  CcbmState s(j.at("num_grids").get<int>(), j.at("num_aps").get<int>(),
              j.at("buckets").get<int>(), j.at("num_users").get<int>());
  for (const auto& v : j.at("visits")) {
    s.visits_.at(v.at(0).get<int>()) = v.at(1).get<int>();
  }
  for (const auto& c : j.at("cells")) {
    s.SetCell(c.at(0).get<int>(), {c.at(1).get<int>(), c.at(2).get<int>()},
              c.at(3).get<int>(), c.at(4).get<double>());
  }
  const auto& last = j.at("last_arm");
  for (std::size_t u = 0; u < last.size(); ++u) {
    if (!last[u].is_null()) {
      s.last_arm_.at(u) = ArmId{last[u].at(0).get<int>(), last[u].at(1).get<int>()};
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Selection

std::vector<Hypercube> UnderExplored(const CcbmState& state, int grid,
                                     std::span<const ArmId> arms,
                                     int beams_per_ap, ControlMode mode) {
  const double threshold = ControlFunction(std::max(1, state.visits(grid)), mode);
  std::vector<Hypercube> cubes;
  for (const ArmId& a : arms) {
    const Hypercube p = HypercubeOf(a, beams_per_ap, state.buckets());
    if (state.counter(grid, p) < threshold) cubes.push_back(p);
  }
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  return cubes;
}

double ExploitValue(const CcbmState& state, int grid, ArmId arm,
                    int beams_per_ap, const LoadTable& loads) {
  const Hypercube p = HypercubeOf(arm, beams_per_ap, state.buckets());
  return PenalizedReward(state.estimate(grid, p), loads.Load(arm), loads.cap());
}

namespace {

std::vector<ArmId> GreedyOnEstimates(const CcbmState& state, int grid,
                                     std::span<const ArmId> arms,
                                     const LoadTable& loads, int beams_per_ap,
                                     int budget) {
  std::vector<double> values(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    values[i] = ExploitValue(state, grid, arms[i], beams_per_ap, loads);
  }
  return GreedyProbeSelect(arms, values, budget);
}

std::vector<ArmId> UniformSample(std::span<const ArmId> pool, int count,
                                 std::mt19937_64& rng) {
  std::vector<ArmId> out;
  out.reserve(count);
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), count, rng);
  return out;
}

bool Contains(std::span<const ArmId> arms, ArmId a) {
  return std::find(arms.begin(), arms.end(), a) != arms.end();
}

}  // namespace

std::vector<ArmId> AttentionBasedSelection(
    const CcbmState& state, int user, int grid,
    std::span<const ArmId> under_explored_arms, std::span<const ArmId> arms,
    int budget, int beams_per_ap, std::mt19937_64& rng) {
  if (static_cast<int>(under_explored_arms.size()) < budget) {
    throw std::logic_error("attention selection needs >= B under-explored arms");
  }
  std::vector<ArmId> never;
  std::vector<ArmId> others;
  for (const ArmId& a : under_explored_arms) {
    const Hypercube p = HypercubeOf(a, beams_per_ap, state.buckets());
    (state.counter(grid, p) == 0 ? never : others).push_back(a);
  }
  const int z = static_cast<int>(never.size());
  if (z >= budget) return UniformSample(never, budget, rng);
  if (z > 0) {
    std::vector<ArmId> picked = never;
    for (const ArmId& a : UniformSample(others, budget - z, rng)) {
      picked.push_back(a);
    }
    return picked;
  }
  const std::optional<ArmId> last = state.last_arm(user);
  if (!last || !Contains(arms, *last)) {
    return UniformSample(under_explored_arms, budget, rng);
  }
  std::vector<ArmId> rest;
  for (const ArmId& a : under_explored_arms) {
    if (a != *last) rest.push_back(a);
  }
  std::vector<ArmId> picked = {*last};
  for (const ArmId& a : UniformSample(rest, budget - 1, rng)) {
    picked.push_back(a);
  }
  return picked;
}

ProbeSelection SelectProbeSet(const CcbmState& state, const CcbmParams& params,
                              int user, int grid, std::span<const ArmId> arms,
                              int t, const LoadTable& loads, int beams_per_ap,
                              std::mt19937_64& rng) {
  if (arms.empty()) throw std::invalid_argument("empty candidate arm set");
  const int budget = params.budget;

  if (params.early_stopping && t > params.t_stop) {
    return {GreedyOnEstimates(state, grid, arms, loads, beams_per_ap,
                              params.ExploitBudget()),
            SelectionBranch::kEarlyStop};
  }

  const std::vector<Hypercube> cubes =
      UnderExplored(state, grid, arms, beams_per_ap, params.control);
  if (cubes.empty()) {
    return {GreedyOnEstimates(state, grid, arms, loads, beams_per_ap, budget),
            SelectionBranch::kExploit};
  }

  std::vector<ArmId> explore;
  std::vector<ArmId> rest;
  for (const ArmId& a : arms) {
    const Hypercube p = HypercubeOf(a, beams_per_ap, state.buckets());
    (std::binary_search(cubes.begin(), cubes.end(), p) ? explore : rest)
        .push_back(a);
  }
  const int q = static_cast<int>(explore.size());
  if (q < budget) {
    std::vector<ArmId> picked = explore;
    for (const ArmId& a :
         GreedyOnEstimates(state, grid, rest, loads, beams_per_ap, budget - q)) {
      picked.push_back(a);
    }
    return {std::move(picked), SelectionBranch::kMixed};
  }
  if (!params.attention) {
    return {UniformSample(explore, budget, rng), SelectionBranch::kUniform};
  }
  return {AttentionBasedSelection(state, user, grid, explore, arms, budget,
                                  beams_per_ap, rng),
          SelectionBranch::kAttention};
}

void ObserveAndUpdate(CcbmState& state, int grid,
                      std::span<const ProbeOutcome> outcomes,
                      int beams_per_ap) {
  for (const ProbeOutcome& o : outcomes) {
    state.Observe(grid, HypercubeOf(o.arm, beams_per_ap, state.buckets()),
                  o.penalized_reward);
  }
}

// ---------------------------------------------------------------------------
// CcbmPolicy

CcbmPolicy::CcbmPolicy(std::string name, CcbmParams params, int num_grids,
                       int num_aps, int beams_per_ap, int num_users)
    : name_(std::move(name)),
      params_(params),
      beams_per_ap_(beams_per_ap),
      state_(num_grids, num_aps, params.buckets, num_users) {
  params_.Validate(num_aps, beams_per_ap);
}

std::vector<ArmId> CcbmPolicy::Select(const StepInput& in,
                                      std::mt19937_64& rng) {
  state_.RecordVisit(in.grid_id);
  ProbeSelection sel = SelectProbeSet(state_, params_, in.user, in.grid_id,
                                      in.arms, in.t, *in.loads, beams_per_ap_,
                                      rng);
  last_branch_ = sel.branch;
  return std::move(sel.arms);
}

void CcbmPolicy::Update(const StepInput& in,
                        std::span<const ProbeOutcome> outcomes,
                        ArmId committed) {
  ObserveAndUpdate(state_, in.grid_id, outcomes, beams_per_ap_);
  state_.set_last_arm(in.user, committed);
}

}  // namespace ccbm
