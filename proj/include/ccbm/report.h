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

#ifndef CCBM_REPORT_H_
#define CCBM_REPORT_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "ccbm/config.h"
#include "ccbm/sim.h"
#include "json.hpp"

namespace ccbm {

// Schema tags written into every output file. Bump on any column or field
// change.
inline constexpr char kRunCsvSchema[] = "ccbm-run-csv/1";
inline constexpr char kRunSummarySchema[] = "ccbm-run-summary/1";
inline constexpr char kCompareCsvSchema[] = "ccbm-compare-csv/1";
inline constexpr char kSweepJsonSchema[] = "ccbm-sweep/1";
inline constexpr char kSweepCsvSchema[] = "ccbm-sweep-csv/1";

// One row per (t, user). cum_regret and cum_approx_regret accumulate over
// rows in file order; l_max is the end-of-step value. `config` is the
// per-run configuration (its policy matches the run).
void WriteRunCsv(std::ostream& out, const ExperimentConfig& config,
                 const RunResult& run);

nlohmann::json RunSummaryJson(const ExperimentConfig& config,
                              const RunResult& run);

// Long format, one row per (policy, seed, t), with a centered moving
// average of the user-mean throughput over `window` steps.
void WriteCompareCsv(std::ostream& out, const ExperimentConfig& config,
                     std::span<const RunResult> runs, int window);

nlohmann::json SweepJson(const ExperimentConfig& config,
                         const SweepResult& sweep);

// Rows of (policy, value, metric, mean, std).
void WriteSweepCsv(std::ostream& out, const ExperimentConfig& config,
                   const SweepResult& sweep);

// Writes `contents` to `path` in one go; throws std::runtime_error on
// failure.
void WriteFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace ccbm

#endif  // CCBM_REPORT_H_
