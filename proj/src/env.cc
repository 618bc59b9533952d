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

#include "ccbm/env.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace ccbm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

Point2 UniformPoint(const Bounds& bounds, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, bounds.width);
  std::uniform_real_distribution<double> uy(0.0, bounds.depth);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Obstacle Obstacle::Box(double x, double y, double w, double d, double height,
                       double loss_db) {
  Polygon poly;
  poly.vertices = {{x, y}, {x + w, y}, {x + w, y + d}, {x, y + d}};
  return Obstacle{std::move(poly), height, loss_db, ObstacleKind::kStatic};
}

Obstacle Obstacle::Human(Point2 center, double radius, double height,
                         double loss_db) {
  return Obstacle{Disc{center, radius}, height, loss_db, ObstacleKind::kHuman};
}

double FootprintArea(const Footprint& f) {
  if (const auto* disc = std::get_if<Disc>(&f)) {
    return std::numbers::pi * disc->radius * disc->radius;
  }
  const auto& v = std::get<Polygon>(f).vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    twice += Cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * twice;
}

void EnvironmentConfig::Validate() const {
  Require(bounds.width > 0 && bounds.depth > 0 && bounds.height > 0,
          "environment bounds must be positive");
  Require(n_aps >= 1, "n_aps must be >= 1");
  Require(beams_per_ap >= 2, "beams_per_ap must be >= 2");
  Require(n_users >= 1, "n_users must be >= 1");
  Require(n_humans >= 0, "n_humans must be >= 0");
  Require(carrier_ghz > 0, "carrier_ghz must be positive");
  Require(main_lobe_gain_dbi > side_lobe_gain_dbi,
          "main_lobe_dbi must exceed side_lobe_dbi");
  Require(ap_height > 0 && ap_height <= bounds.height,
          "ap_height must lie inside the room height");
  Require(user_height > 0 && user_height <= bounds.height,
          "user_height must lie inside the room height");
  Require(human_speed > 0 && user_speed > 0, "agent speeds must be positive");
  Require(human_radius > 0 && human_height > 0,
          "human footprint must be non-degenerate");
  Require(loss_human_db >= 0 && loss_wood_db >= 0 && loss_metal_db >= 0,
          "penetration losses must be >= 0");
  Require(ap_positions.empty() ||
              static_cast<int>(ap_positions.size()) == n_aps,
          "ap_positions must list exactly n_aps entries");
  for (const Point2& p : ap_positions) {
    Require(p.x >= 0 && p.x <= bounds.width && p.y >= 0 && p.y <= bounds.depth,
            "ap_positions entry outside the room");
  }
  for (const FurnitureSpec& f : furniture) {
    Require(f.w > 0 && f.d > 0 && f.height > 0,
            "furniture footprint must be non-degenerate");
  }
  Require(n_cabinets >= 0 && n_tables >= 0 && n_chairs >= 0,
          "furniture counts must be >= 0");
}

std::shared_ptr<const Scene> BuildScene(const EnvironmentConfig& config) {
  config.Validate();
  auto scene = std::make_shared<Scene>();
  scene->bounds = config.bounds;
  scene->carrier_ghz = config.carrier_ghz;
  scene->user_height = config.user_height;

  std::mt19937_64 rng(config.scene_seed);
  const Bounds& b = config.bounds;

  std::vector<Point2> ap_xy = config.ap_positions;
  if (ap_xy.empty()) {
    // Uniform placement away from the walls with a minimum spacing so that
    // two APs never share a corner of the room.
    const double min_sep = 0.25 * std::min(b.width, b.depth);
    std::uniform_real_distribution<double> ux(0.1 * b.width, 0.9 * b.width);
    std::uniform_real_distribution<double> uy(0.1 * b.depth, 0.9 * b.depth);
    for (int tries = 0; static_cast<int>(ap_xy.size()) < config.n_aps;
         ++tries) {
      const double x = ux(rng);
      const double y = uy(rng);
      const Point2 p{x, y};
      const bool spaced = tries > 10000 ||
                          std::all_of(ap_xy.begin(), ap_xy.end(), [&](Point2 q) {
                            return std::hypot(p.x - q.x, p.y - q.y) >= min_sep;
                          });
      if (spaced) ap_xy.push_back(p);
    }
  }
  for (int i = 0; i < config.n_aps; ++i) {
    AccessPoint ap;
    ap.id = i;
    ap.position = {ap_xy[i].x, ap_xy[i].y, config.ap_height};
    ap.tx_power_dbm = config.tx_power_dbm;
    ap.beam_count = config.beams_per_ap;
    ap.main_lobe_gain_dbi = config.main_lobe_gain_dbi;
    ap.side_lobe_gain_dbi = config.side_lobe_gain_dbi;
    scene->aps.push_back(ap);
  }

  auto loss_of = [&](Material m) {
    return m == Material::kMetal ? config.loss_metal_db : config.loss_wood_db;
  };
  std::vector<FurnitureSpec> furniture = config.furniture;
  if (furniture.empty()) {
    auto place = [&](int count, Material m, double w, double d, double h) {
      std::uniform_real_distribution<double> ux(0.0, b.width - w);
      std::uniform_real_distribution<double> uy(0.0, b.depth - d);
      std::bernoulli_distribution rotate(0.5);
      for (int i = 0; i < count; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        const bool r = rotate(rng);
        furniture.push_back({m, x, y, r ? d : w, r ? w : d, h});
      }
    };
    place(config.n_cabinets, Material::kMetal, 1.2, 0.5, 2.0);
    place(config.n_tables, Material::kWood, 1.6, 0.8, 0.75);
    place(config.n_chairs, Material::kWood, 0.5, 0.5, 0.9);
  }
  for (const FurnitureSpec& f : furniture) {
    scene->static_obstacles.push_back(
        Obstacle::Box(f.x, f.y, f.w, f.d, f.height, loss_of(f.material)));
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Mobility

MobilityState InitialMobility(const EnvironmentConfig& config,
                              std::mt19937_64& rng) {
  MobilityState state;
  auto spawn = [&](int count, double speed, std::vector<Agent>& out) {
    for (int i = 0; i < count; ++i) {
      Agent a;
      a.position = UniformPoint(config.bounds, rng);
      a.waypoint = UniformPoint(config.bounds, rng);
      a.speed = speed;
      out.push_back(a);
    }
  };
  spawn(config.n_humans, config.human_speed, state.humans);
  spawn(config.n_users, config.user_speed, state.users);
  return state;
}

void StepAgent(Agent& agent, double dt, const Bounds& bounds,
               std::mt19937_64& rng) {
  const double dx = agent.waypoint.x - agent.position.x;
  const double dy = agent.waypoint.y - agent.position.y;
  const double remaining = std::hypot(dx, dy);
  const double travel = agent.speed * dt;
  if (remaining <= travel) {
    agent.position = agent.waypoint;
    agent.waypoint = UniformPoint(bounds, rng);
    return;
  }
  agent.position.x += dx / remaining * travel;
  agent.position.y += dy / remaining * travel;
}

MobilityState StepMobility(MobilityState state, double dt, const Bounds& bounds,
                           std::mt19937_64& rng) {
  if (!(dt > 0)) throw std::invalid_argument("mobility step dt must be > 0");
  for (Agent& h : state.humans) StepAgent(h, dt, bounds, rng);
  for (Agent& u : state.users) StepAgent(u, dt, bounds, rng);
  return state;
}

// ---------------------------------------------------------------------------
// Propagation

double LosClass::total_loss_db() const {
  double total = 0.0;
  for (double l : blocker_losses_db) total += l;
  return total;
}

bool SegmentFootprintInterval(Point2 p0, Point2 p1, const Footprint& footprint,
                              double& enter, double& leave) {
  const Point2 d{p1.x - p0.x, p1.y - p0.y};
  if (const auto* disc = std::get_if<Disc>(&footprint)) {
    const Point2 f{p0.x - disc->center.x, p0.y - disc->center.y};
    const double a = d.x * d.x + d.y * d.y;
    const double c = f.x * f.x + f.y * f.y - disc->radius * disc->radius;
    if (a == 0.0) {
      if (c > 0.0) return false;
      enter = 0.0;
      leave = 1.0;
      return true;
    }
    const double b = 2.0 * (f.x * d.x + f.y * d.y);
    const double disc_sq = b * b - 4.0 * a * c;
    if (disc_sq < 0.0) return false;
    const double root = std::sqrt(disc_sq);
    enter = std::max(0.0, (-b - root) / (2.0 * a));
    leave = std::min(1.0, (-b + root) / (2.0 * a));
    return enter <= leave;
  }

  // Cyrus-Beck clipping against a counter-clockwise convex polygon.
  const auto& v = std::get<Polygon>(footprint).vertices;
  enter = 0.0;
  leave = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    const Point2 outward{b.y - a.y, -(b.x - a.x)};
    const double num = outward.x * (p0.x - a.x) + outward.y * (p0.y - a.y);
    const double den = outward.x * d.x + outward.y * d.y;
    if (den == 0.0) {
      if (num > 0.0) return false;
      continue;
    }
    const double s = -num / den;
    if (den > 0.0) {
      leave = std::min(leave, s);
    } else {
      enter = std::max(enter, s);
    }
    if (enter > leave) return false;
  }
  return true;
}

bool PointInFootprint(Point2 p, const Footprint& footprint) {
  if (const auto* disc = std::get_if<Disc>(&footprint)) {
    const double dx = p.x - disc->center.x;
    const double dy = p.y - disc->center.y;
    return dx * dx + dy * dy <= disc->radius * disc->radius;
  }
  const auto& v = std::get<Polygon>(footprint).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    if (Cross({b.x - a.x, b.y - a.y}, {p.x - a.x, p.y - a.y}) < 0.0) {
      return false;
    }
  }
  return true;
}

bool SegmentBlocked(const Position& a, const Position& b,
                    const Obstacle& obstacle) {
  double enter = 0.0;
  double leave = 0.0;
  if (!SegmentFootprintInterval({a.x, a.y}, {b.x, b.y}, obstacle.footprint,
                                enter, leave)) {
    return false;
  }
  // A crossing of zero length only grazes the footprint.
  if (!(leave > enter)) return false;
  // Height is linear along the segment, so its minimum over the crossing
  // sits at one of the interval ends.
  const double z_enter = a.z + enter * (b.z - a.z);
  const double z_leave = a.z + leave * (b.z - a.z);
  return std::min(z_enter, z_leave) <= obstacle.height;
}

LosClass ClassifyLos(std::span<const Obstacle> obstacles, const Position& from,
                     const Position& to) {
  LosClass result;
  for (const Obstacle& o : obstacles) {
    if (SegmentBlocked(from, to, o)) {
      result.blocker_losses_db.push_back(o.penetration_loss_db);
    }
  }
  return result;
}

double PathLossDb(const LosClass& los, double distance_m, double freq_ghz,
                  const ChannelParams& params) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path loss needs a positive distance");
  }
  const double log_d = std::log10(distance_m);
  const double log_f = std::log10(freq_ghz);
  if (los.is_los()) {
    return params.los_intercept + params.los_distance_coeff * log_d +
           params.los_freq_coeff * log_f;
  }
  return params.nlos_intercept + params.nlos_distance_coeff * log_d +
         params.nlos_freq_coeff * log_f + los.total_loss_db();
}

double AzimuthRad(const AccessPoint& ap, const Position& pos) {
  const double dx = pos.x - ap.position.x;
  const double dy = pos.y - ap.position.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  double az = std::atan2(dy, dx);
  if (az < 0.0) az += kTwoPi;
  if (az >= kTwoPi) az = 0.0;
  return az;
}

int MainLobeBeam(const AccessPoint& ap, const Position& pos) {
  const double sector = kTwoPi / ap.beam_count;
  const int beam = static_cast<int>(std::floor(AzimuthRad(ap, pos) / sector));
  return std::clamp(beam, 0, ap.beam_count - 1);
}

double BeamGainDb(const AccessPoint& ap, int beam, const Position& pos) {
  if (beam < 0 || beam >= ap.beam_count) {
    throw std::out_of_range("beam index out of range");
  }
  return beam == MainLobeBeam(ap, pos) ? ap.main_lobe_gain_dbi
                                       : ap.side_lobe_gain_dbi;
}

double NormalizeReward(double rss_dbm, double lo_dbm, double hi_dbm) {
  if (!(lo_dbm < hi_dbm)) {
    throw std::invalid_argument("normalization window needs lo < hi");
  }
  return std::clamp((rss_dbm - lo_dbm) / (hi_dbm - lo_dbm), 0.0, 1.0);
}

double Distance3d(const Position& a, const Position& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

// ---------------------------------------------------------------------------
// Environment

Environment::Environment(std::shared_ptr<const Scene> scene)
    : scene_(std::move(scene)),
      obstacles_(scene_->static_obstacles),
      num_static_(scene_->static_obstacles.size()) {}

void Environment::SetHumans(std::span<const Agent> humans, double radius,
                            double height, double loss_db) {
  obstacles_.resize(num_static_);
  for (const Agent& h : humans) {
    obstacles_.push_back(Obstacle::Human(h.position, radius, height, loss_db));
  }
}

LosClass Environment::ClassifyLos(const AccessPoint& ap,
                                  const Position& pos) const {
  return ccbm::ClassifyLos(obstacles_, ap.position, pos);
}

double Environment::TrueRssDbm(const AccessPoint& ap, int beam,
                               const Position& pos) const {
  const double pl = PathLossDb(ClassifyLos(ap, pos), Distance3d(ap.position, pos),
                               scene_->carrier_ghz, scene_->channel);
  return ap.tx_power_dbm + BeamGainDb(ap, beam, pos) - pl;
}

void Environment::AllBeamsRssDbm(const AccessPoint& ap, const Position& pos,
                                 std::span<double> out) const {
  const double pl = PathLossDb(ClassifyLos(ap, pos), Distance3d(ap.position, pos),
                               scene_->carrier_ghz, scene_->channel);
  const int main = MainLobeBeam(ap, pos);
  for (int beam = 0; beam < ap.beam_count; ++beam) {
    const double gain =
        beam == main ? ap.main_lobe_gain_dbi : ap.side_lobe_gain_dbi;
    out[beam] = ap.tx_power_dbm + gain - pl;
  }
}

double Environment::BestBeamRssDbm(const AccessPoint& ap,
                                   const Position& pos) const {
  return TrueRssDbm(ap, MainLobeBeam(ap, pos), pos);
}

}  // namespace ccbm
