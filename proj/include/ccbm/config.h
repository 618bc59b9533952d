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

#ifndef CCBM_CONFIG_H_
#define CCBM_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccbm/sim.h"
#include "json.hpp"

namespace ccbm {

struct SweepSettings {
  SweepAxis axis = SweepAxis::kBudget;
  std::vector<int> values = {2, 4, 8, 16};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<PolicyKind> policies = {PolicyKind::kCcbm, PolicyKind::kUcb};
};

struct OutputSettings {
  std::string out_dir = "out";
  int window = 50;  // sliding-window width for smoothed throughput
};

struct ExperimentConfig {
  SimConfig sim;
  SweepSettings sweep;
  OutputSettings output;
};

// A malformed or inconsistent config. `line` is 0 when the problem is not
// tied to a single line (for example a cross-field constraint).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);

  int line() const { return line_; }

 private:
  int line_;
};

// Parses the INI-style text. Every key must belong to a known section;
// unknown or repeated keys are errors. The result is validated.
ExperimentConfig ParseConfig(std::string_view text,
                             std::string_view source = "<config>");

// Reads and parses a file; a missing file is a ConfigError.
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Resolved configuration, used as the provenance echo in every output file.
nlohmann::json ConfigToJson(const ExperimentConfig& config);
nlohmann::json SimConfigToJson(const SimConfig& config);

// Comma-list helpers shared with the command line.
std::vector<int> ParseIntList(std::string_view text);
std::vector<std::uint64_t> ParseSeedList(std::string_view text);
std::vector<PolicyKind> ParsePolicyList(std::string_view text);

}  // namespace ccbm

#endif  // CCBM_CONFIG_H_
