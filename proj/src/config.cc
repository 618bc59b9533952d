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

#include "ccbm/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace ccbm {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitList(std::string_view s) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = Trim(s.substr(0, comma));
    if (!item.empty()) parts.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return parts;
}

template <typename T>
T ParseNumber(std::string_view s) {
  s = Trim(s);
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) +
                                "'");
  }
  return value;
}

// "a..b" expands to every integer in [a, b].
template <typename T>
void AppendRangeOrValue(std::string_view item, std::vector<T>& out) {
  const auto dots = item.find("..");
  if (dots == std::string_view::npos) {
    out.push_back(ParseNumber<T>(item));
    return;
  }
  const T lo = ParseNumber<T>(item.substr(0, dots));
  const T hi = ParseNumber<T>(item.substr(dots + 2));
  if (hi < lo) {
    throw std::invalid_argument("empty range '" + std::string(item) + "'");
  }
  for (T v = lo; v <= hi; ++v) out.push_back(v);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

template <typename T, typename Field>
Setter Num(Field field) {
  return [field](ExperimentConfig& c, std::string_view v) {
    field(c) = ParseNumber<T>(v);
  };
}

std::map<std::string, SectionTable, std::less<>> BuildTables() {
  std::map<std::string, SectionTable, std::less<>> t;

  SectionTable& env = t["environment"];
  env["width"] = Num<double>([](auto& c) -> double& { return c.sim.env.bounds.width; });
  env["depth"] = Num<double>([](auto& c) -> double& { return c.sim.env.bounds.depth; });
  env["height"] = Num<double>([](auto& c) -> double& { return c.sim.env.bounds.height; });
  env["n_aps"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_aps; });
  env["beams_per_ap"] = Num<int>([](auto& c) -> int& { return c.sim.env.beams_per_ap; });
  env["carrier_ghz"] = Num<double>([](auto& c) -> double& { return c.sim.env.carrier_ghz; });
  env["ap_height"] = Num<double>([](auto& c) -> double& { return c.sim.env.ap_height; });
  env["ap_positions"] = [](ExperimentConfig& c, std::string_view v) {
    c.sim.env.ap_positions.clear();
    for (std::string_view item : SplitList(v)) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) {
        throw std::invalid_argument("AP position must be x:y, got '" +
                                    std::string(item) + "'");
      }
      c.sim.env.ap_positions.push_back(
          {ParseNumber<double>(item.substr(0, colon)),
           ParseNumber<double>(item.substr(colon + 1))});
    }
  };
  env["tx_power_dbm"] = Num<double>([](auto& c) -> double& { return c.sim.env.tx_power_dbm; });
  env["main_lobe_gain_dbi"] = Num<double>([](auto& c) -> double& { return c.sim.env.main_lobe_gain_dbi; });
  env["side_lobe_gain_dbi"] = Num<double>([](auto& c) -> double& { return c.sim.env.side_lobe_gain_dbi; });
  env["n_cabinets"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_cabinets; });
  env["n_tables"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_tables; });
  env["n_chairs"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_chairs; });
  env["loss_human_db"] = Num<double>([](auto& c) -> double& { return c.sim.env.loss_human_db; });
  env["loss_wood_db"] = Num<double>([](auto& c) -> double& { return c.sim.env.loss_wood_db; });
  env["loss_metal_db"] = Num<double>([](auto& c) -> double& { return c.sim.env.loss_metal_db; });
  env["n_humans"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_humans; });
  env["human_speed"] = Num<double>([](auto& c) -> double& { return c.sim.env.human_speed; });
  env["human_radius"] = Num<double>([](auto& c) -> double& { return c.sim.env.human_radius; });
  env["human_height"] = Num<double>([](auto& c) -> double& { return c.sim.env.human_height; });
  env["n_users"] = Num<int>([](auto& c) -> int& { return c.sim.env.n_users; });
  env["user_speed"] = Num<double>([](auto& c) -> double& { return c.sim.env.user_speed; });
  env["user_height"] = Num<double>([](auto& c) -> double& { return c.sim.env.user_height; });
  env["scene_seed"] = Num<std::uint64_t>([](auto& c) -> std::uint64_t& { return c.sim.env.scene_seed; });

  SectionTable& pol = t["policy"];
  pol["name"] = [](ExperimentConfig& c, std::string_view v) {
    c.sim.policy = ParsePolicyKind(Trim(v));
  };
  pol["budget"] = Num<int>([](auto& c) -> int& { return c.sim.budget; });
  pol["candidate_aps"] = Num<int>([](auto& c) -> int& { return c.sim.candidate_aps; });
  pol["buckets"] = [](ExperimentConfig& c, std::string_view v) {
    v = Trim(v);
    if (v == "theory") {
      c.sim.buckets = 0;
      return;
    }
    c.sim.buckets = ParseNumber<int>(v);
    if (c.sim.buckets < 1) {
      throw std::invalid_argument("buckets h must be >= 1 or 'theory'");
    }
  };
  pol["load_cap"] = Num<int>([](auto& c) -> int& { return c.sim.load_cap; });
  pol["t_stop"] = [](ExperimentConfig& c, std::string_view v) {
    v = Trim(v);
    if (v == "grids") {
      c.sim.t_stop = 0;
      return;
    }
    c.sim.t_stop = ParseNumber<int>(v);
    if (c.sim.t_stop < 1) {
      throw std::invalid_argument("t_stop must be >= 1 or 'grids'");
    }
  };
  pol["control"] = [](ExperimentConfig& c, std::string_view v) {
    v = Trim(v);
    if (v == "smooth") {
      c.sim.control = ControlMode::kSmooth;
    } else if (v == "literal") {
      c.sim.control = ControlMode::kLiteral;
    } else {
      throw std::invalid_argument("control must be 'smooth' or 'literal'");
    }
  };

  SectionTable& sim = t["simulation"];
  sim["horizon"] = Num<int>([](auto& c) -> int& { return c.sim.horizon; });
  sim["seed"] = Num<std::uint64_t>([](auto& c) -> std::uint64_t& { return c.sim.seed; });
  sim["cell"] = Num<double>([](auto& c) -> double& { return c.sim.cell; });
  sim["pred_noise_db"] = Num<double>([](auto& c) -> double& { return c.sim.pred_noise_db; });
  sim["meas_noise_db"] = Num<double>([](auto& c) -> double& { return c.sim.meas_noise_db; });
  sim["step_duration"] = Num<double>([](auto& c) -> double& { return c.sim.step_duration; });
  sim["bandwidth_hz"] = Num<double>([](auto& c) -> double& { return c.sim.bandwidth_hz; });
  sim["noise_floor_dbm"] = Num<double>([](auto& c) -> double& { return c.sim.noise_floor_dbm; });
  sim["norm_lo_dbm"] = Num<double>([](auto& c) -> double& { return c.sim.window.lo_dbm; });
  sim["norm_hi_dbm"] = Num<double>([](auto& c) -> double& { return c.sim.window.hi_dbm; });

  SectionTable& sweep = t["sweep"];
  sweep["axis"] = [](ExperimentConfig& c, std::string_view v) {
    c.sweep.axis = ParseSweepAxis(Trim(v));
  };
  sweep["values"] = [](ExperimentConfig& c, std::string_view v) {
    c.sweep.values = ParseIntList(v);
  };
  sweep["seeds"] = [](ExperimentConfig& c, std::string_view v) {
    c.sweep.seeds = ParseSeedList(v);
  };
  sweep["policies"] = [](ExperimentConfig& c, std::string_view v) {
    c.sweep.policies = ParsePolicyList(v);
  };

  SectionTable& out = t["output"];
  out["out_dir"] = [](ExperimentConfig& c, std::string_view v) {
    c.output.out_dir = std::string(Trim(v));
    if (c.output.out_dir.empty()) {
      throw std::invalid_argument("out_dir must not be empty");
    }
  };
  out["window"] = Num<int>([](auto& c) -> int& { return c.output.window; });
  return t;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line,
                         const std::string& what)
    : std::runtime_error(line > 0
                             ? source + ":" + std::to_string(line) + ": " + what
                             : source + ": " + what),
      line_(line) {}

std::vector<int> ParseIntList(std::string_view text) {
  std::vector<int> out;
  for (std::string_view item : SplitList(text)) AppendRangeOrValue(item, out);
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

std::vector<std::uint64_t> ParseSeedList(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (std::string_view item : SplitList(text)) AppendRangeOrValue(item, out);
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

std::vector<PolicyKind> ParsePolicyList(std::string_view text) {
  std::vector<PolicyKind> out;
  for (std::string_view item : SplitList(text)) {
    out.push_back(ParsePolicyKind(item));
  }
  if (out.empty()) throw std::invalid_argument("empty policy list");
  return out;
}

ExperimentConfig ParseConfig(std::string_view text, std::string_view source) {
  static const auto tables = BuildTables();
  const std::string src(source);
  ExperimentConfig config;
  const SectionTable* section = nullptr;
  std::string section_name;
  std::set<std::string> seen;

  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != line.npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(src, line_no, "unterminated section header");
      }
      section_name = std::string(Trim(line.substr(1, line.size() - 2)));
      const auto it = tables.find(section_name);
      if (it == tables.end()) {
        throw ConfigError(src, line_no,
                          "unknown section [" + section_name + "]");
      }
      section = &it->second;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == line.npos) {
      throw ConfigError(src, line_no, "expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (section == nullptr) {
      throw ConfigError(src, line_no,
                        "key '" + key + "' appears before any section");
    }
    const auto setter = section->find(key);
    if (setter == section->end()) {
      throw ConfigError(src, line_no,
                        "unknown key '" + key + "' in [" + section_name + "]");
    }
    if (!seen.insert(section_name + "." + key).second) {
      throw ConfigError(src, line_no,
                        "duplicate key '" + key + "' in [" + section_name + "]");
    }
    try {
      setter->second(config, value);
    } catch (const std::exception& e) {
      throw ConfigError(src, line_no, "key '" + key + "': " + e.what());
    }
  }

  try {
    config.sim.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(src, 0, e.what());
  }
  if (config.output.window < 1) {
    throw ConfigError(src, 0, "output window must be >= 1");
  }
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), path.string());
}

nlohmann::json SimConfigToJson(const SimConfig& c) {
  using nlohmann::json;
  const EnvironmentConfig& e = c.env;
  json aps = json::array();
  for (const Point2& p : e.ap_positions) aps.push_back({p.x, p.y});
  json env = {
      {"width", e.bounds.width},
      {"depth", e.bounds.depth},
      {"height", e.bounds.height},
      {"n_aps", e.n_aps},
      {"beams_per_ap", e.beams_per_ap},
      {"carrier_ghz", e.carrier_ghz},
      {"ap_height", e.ap_height},
      {"ap_positions", aps},
      {"tx_power_dbm", e.tx_power_dbm},
      {"main_lobe_gain_dbi", e.main_lobe_gain_dbi},
      {"side_lobe_gain_dbi", e.side_lobe_gain_dbi},
      {"n_cabinets", e.n_cabinets},
      {"n_tables", e.n_tables},
      {"n_chairs", e.n_chairs},
      {"loss_human_db", e.loss_human_db},
      {"loss_wood_db", e.loss_wood_db},
      {"loss_metal_db", e.loss_metal_db},
      {"n_humans", e.n_humans},
      {"human_speed", e.human_speed},
      {"human_radius", e.human_radius},
      {"human_height", e.human_height},
      {"n_users", e.n_users},
      {"user_speed", e.user_speed},
      {"user_height", e.user_height},
      {"scene_seed", e.scene_seed},
  };
  json policy = {
      {"name", PolicyName(c.policy)},
      {"budget", c.budget},
      {"candidate_aps", c.candidate_aps},
      {"buckets", c.ResolvedBuckets()},
      {"load_cap", c.load_cap},
      {"t_stop", c.ResolvedTStop()},
      {"control", c.control == ControlMode::kSmooth ? "smooth" : "literal"},
  };
  json sim = {
      {"horizon", c.horizon},
      {"seed", c.seed},
      {"cell", c.cell},
      {"pred_noise_db", c.pred_noise_db},
      {"meas_noise_db", c.meas_noise_db},
      {"step_duration", c.step_duration},
      {"bandwidth_hz", c.bandwidth_hz},
      {"noise_floor_dbm", c.noise_floor_dbm},
      {"norm_lo_dbm", c.window.lo_dbm},
      {"norm_hi_dbm", c.window.hi_dbm},
  };
  return {{"environment", env}, {"policy", policy}, {"simulation", sim}};
}

nlohmann::json ConfigToJson(const ExperimentConfig& c) {
  nlohmann::json j = SimConfigToJson(c.sim);
  nlohmann::json policies = nlohmann::json::array();
  for (PolicyKind p : c.sweep.policies) policies.push_back(PolicyName(p));
  j["sweep"] = {{"axis", SweepAxisName(c.sweep.axis)},
                {"values", c.sweep.values},
                {"seeds", c.sweep.seeds},
                {"policies", policies}};
  j["output"] = {{"out_dir", c.output.out_dir}, {"window", c.output.window}};
  return j;
}

}  // namespace ccbm
