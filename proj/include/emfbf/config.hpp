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

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emfbf/allocators.hpp"
#include "emfbf/channel.hpp"
#include "emfbf/evaluation.hpp"
#include "emfbf/scenario.hpp"

namespace emfbf {

inline constexpr const char* kVersion = "0.1.0";

struct MonteCarloSpec {
  std::vector<int> users = {3, 4, 5, 6, 7, 8, 9};
  int samples = 200;
};

/// Everything one run needs. Every field has a default, so `{}` is a valid
/// configuration file.
struct SimulationConfig {
  ScenarioConfig scenario;
  DualGdConfig dual_gd;
  GridSpec heatmap;
  MonteCarloSpec montecarlo;
  std::uint64_t seed = 7;
};

/// Strict: unknown keys and wrong types raise InvalidConfig naming the
/// dotted field path. A run manifest is accepted as well; its resolved
/// config and seed are used.
SimulationConfig config_from_json(const nlohmann::json& j);
SimulationConfig parse_config_text(std::string_view text);
SimulationConfig load_config_file(const std::filesystem::path& path);

/// Fully resolved configuration; config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const SimulationConfig& config);

/// Canonical serialization of a drawn snapshot. Doubles are written with
/// round-trip precision, so scenario_from_json restores it bit for bit.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

/// Per-entry {re, im} dump of a channel set for regression fixtures.
nlohmann::json channel_to_json(const ChannelSet& channel);
ChannelSet channel_from_json(const nlohmann::json& j);

}  // namespace emfbf
