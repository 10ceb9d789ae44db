// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The emfbf Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "emfbf/evaluation.hpp"
#include "emfbf/scenario.hpp"

namespace emfbf {

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest text that reads back to the same double ("%.17g" fallback).
std::string format_number(double value);

/// x, y, scheme, power_dBm; rows ordered by scheme, then y, then x.
std::string heatmap_csv(const HeatmapGrid& grid);

/// x, y, scheme, exceeds (0/1); same row order as the heatmap.
std::string exceedance_csv(const ExceedanceGrid& grid);

nlohmann::json snapshot_report_json(const Scenario& scenario, const SnapshotResult& result,
                                    const ExceedanceGrid& exceedance);

/// L, scheme, mean_power_W, mean_capacity_bps, mean_loss_pct, n, excluded.
std::string montecarlo_csv(const MonteCarloReport& report);

/// One row per (sample, scheme):
/// L, sample, seed, scheme, excluded, power_W, capacity_bps, loss_pct,
/// max_sampled_power_W, iterations, converged.
std::string montecarlo_samples_csv(const MonteCarloReport& report);

nlohmann::json montecarlo_report_json(const MonteCarloReport& report);

enum class PatternCut { kAzimuth, kElevation };

/// angle_deg, gain_dB over the cut's full range at `step_deg`.
std::string pattern_csv(PatternCut cut, double step_deg, const PatternConstants& pc = {});

}  // namespace emfbf
