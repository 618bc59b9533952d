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

#ifndef CCBM_ENV_H_
#define CCBM_ENV_H_

// Synthetic indoor mmWave environment.
//
// A Scene is the immutable part of the world: room bounds, access points and
// furniture. Humans and users move by random waypoint; an Environment pairs a
// shared Scene with the current human obstacles and answers ground-truth
// link-quality queries (LoS classification, path loss, beam gain, RSS).

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ccbm {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Bounds {
  double width = 40.0;
  double depth = 40.0;
  double height = 3.0;

  bool Contains(const Position& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= depth &&
           p.z >= 0.0 && p.z <= height;
  }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Convex polygon, vertices in counter-clockwise order.
struct Polygon {
  std::vector<Point2> vertices;
};

struct Disc {
  Point2 center;
  double radius = 0.0;
};

using Footprint = std::variant<Polygon, Disc>;

enum class ObstacleKind { kStatic, kHuman };

struct Obstacle {
  Footprint footprint;
  double height = 0.0;
  double penetration_loss_db = 0.0;
  ObstacleKind kind = ObstacleKind::kStatic;

  // Axis-aligned box helper for furniture.
  static Obstacle Box(double x, double y, double w, double d, double height,
                      double loss_db);
  static Obstacle Human(Point2 center, double radius, double height,
                        double loss_db);
};

double FootprintArea(const Footprint& f);

struct AccessPoint {
  int id = 0;
  Position position;
  double tx_power_dbm = 20.0;
  int beam_count = 8;
  double main_lobe_gain_dbi = 15.0;
  double side_lobe_gain_dbi = -5.0;
};

enum class Material { kWood, kMetal };

struct FurnitureSpec {
  Material material = Material::kWood;
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double d = 1.0;
  double height = 0.75;
};

struct EnvironmentConfig {
  Bounds bounds;
  int n_aps = 4;
  int beams_per_ap = 8;
  double carrier_ghz = 60.0;
  double ap_height = 2.9;
  // Explicit AP xy positions; when empty, APs are placed from scene_seed.
  std::vector<Point2> ap_positions;
  double tx_power_dbm = 20.0;
  double main_lobe_gain_dbi = 15.0;
  double side_lobe_gain_dbi = -5.0;

  // Explicit furniture; when empty, n_cabinets/n_tables/n_chairs are placed
  // from scene_seed.
  std::vector<FurnitureSpec> furniture;
  int n_cabinets = 10;
  int n_tables = 16;
  int n_chairs = 32;

  double loss_human_db = 15.0;
  double loss_wood_db = 10.0;
  double loss_metal_db = 30.0;

  int n_humans = 15;
  double human_speed = 0.8;
  double human_radius = 0.25;
  double human_height = 1.75;

  // User count and speed are not pinned down by the evaluation setup; the
  // default speed moves a user about one 1 m grid cell per 30 ms step.
  int n_users = 5;
  double user_speed = 1.0 / 0.03;
  double user_height = 1.0;

  std::uint64_t scene_seed = 2024;

  // Throws std::invalid_argument naming the first violated constraint.
  void Validate() const;
};

// 3GPP indoor-office path-loss coefficients (dB, frequency in GHz).
struct ChannelParams {
  double los_intercept = 32.4;
  double los_distance_coeff = 17.3;
  double los_freq_coeff = 20.0;
  double nlos_intercept = 17.3;
  double nlos_distance_coeff = 38.3;
  double nlos_freq_coeff = 24.9;
};

struct Scene {
  Bounds bounds;
  std::vector<AccessPoint> aps;
  std::vector<Obstacle> static_obstacles;
  double carrier_ghz = 60.0;
  double user_height = 1.0;
  ChannelParams channel;

  int beam_count() const { return aps.empty() ? 0 : aps.front().beam_count; }
  int num_arms() const { return static_cast<int>(aps.size()) * beam_count(); }
};

// Builds the immutable scene. Randomized placements draw from scene_seed only.
std::shared_ptr<const Scene> BuildScene(const EnvironmentConfig& config);

// ---------------------------------------------------------------------------
// Mobility

struct Agent {
  Point2 position;
  Point2 waypoint;
  double speed = 0.0;
};

struct MobilityState {
  std::vector<Agent> humans;
  std::vector<Agent> users;
};

MobilityState InitialMobility(const EnvironmentConfig& config,
                              std::mt19937_64& rng);

// Moves one agent toward its waypoint. On arrival it lands exactly on the
// waypoint and a fresh uniform waypoint is drawn.
void StepAgent(Agent& agent, double dt, const Bounds& bounds,
               std::mt19937_64& rng);

// Humans first, then users, each in index order.
MobilityState StepMobility(MobilityState state, double dt, const Bounds& bounds,
                           std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Propagation

struct LosClass {
  // Empty for line of sight.
  std::vector<double> blocker_losses_db;

  bool is_los() const { return blocker_losses_db.empty(); }
  double total_loss_db() const;
};

// Parameter interval [enter, leave] along p0 + s*(p1 - p0), s in [0, 1], for
// which the 2-D segment lies inside the footprint. Returns false if disjoint.
bool SegmentFootprintInterval(Point2 p0, Point2 p1, const Footprint& footprint,
                              double& enter, double& leave);

bool PointInFootprint(Point2 p, const Footprint& footprint);

// True if the open 3-D segment a-b passes through the obstacle's extrusion.
bool SegmentBlocked(const Position& a, const Position& b,
                    const Obstacle& obstacle);

LosClass ClassifyLos(std::span<const Obstacle> obstacles, const Position& from,
                     const Position& to);

// Throws std::domain_error for distance_m <= 0.
double PathLossDb(const LosClass& los, double distance_m, double freq_ghz,
                  const ChannelParams& params = {});

// Azimuth from ap to pos in [0, 2*pi); 0 if pos is directly below the AP.
double AzimuthRad(const AccessPoint& ap, const Position& pos);

// Index of the beam whose half-open sector contains the azimuth to pos.
int MainLobeBeam(const AccessPoint& ap, const Position& pos);

// Throws std::out_of_range for a bad beam index.
double BeamGainDb(const AccessPoint& ap, int beam, const Position& pos);

// Clipped linear map of [lo, hi] dBm onto [0, 1]. Throws
// std::invalid_argument if lo >= hi.
double NormalizeReward(double rss_dbm, double lo_dbm, double hi_dbm);

double Distance3d(const Position& a, const Position& b);

// Scene plus the humans' current footprints.
class Environment {
 public:
  explicit Environment(std::shared_ptr<const Scene> scene);

  const Scene& scene() const { return *scene_; }
  std::span<const Obstacle> obstacles() const { return obstacles_; }

  void SetHumans(std::span<const Agent> humans, double radius, double height,
                 double loss_db);

  const AccessPoint& ap(int id) const { return scene_->aps.at(id); }
  int num_aps() const { return static_cast<int>(scene_->aps.size()); }
  int beam_count() const { return scene_->beam_count(); }

  LosClass ClassifyLos(const AccessPoint& ap, const Position& pos) const;

  double TrueRssDbm(const AccessPoint& ap, int beam, const Position& pos) const;

  // RSS of every beam of one AP; the LoS query is shared by all beams.
  void AllBeamsRssDbm(const AccessPoint& ap, const Position& pos,
                      std::span<double> out) const;

  // Best-beam RSS of an AP.
  double BestBeamRssDbm(const AccessPoint& ap, const Position& pos) const;

 private:
  std::shared_ptr<const Scene> scene_;
  std::vector<Obstacle> obstacles_;
  std::size_t num_static_ = 0;
};

}  // namespace ccbm

#endif  // CCBM_ENV_H_
