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

#include <string>

#include <doctest.h>

#include "emfbf/channel.hpp"
#include "emfbf/config.hpp"
#include "emfbf/errors.hpp"
#include "test_util.hpp"

using namespace emfbf;
using nlohmann::json;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const InvalidConfig& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty object gives the defaults") {
    const SimulationConfig c = parse_config_text("{}");
    CHECK(c.seed == 7);
    CHECK(c.scenario.ue.count == 4);
    CHECK(c.scenario.bs.columns == 8);
    CHECK(c.scenario.radio.emf_threshold_dbm == 52.0);
    CHECK_FALSE(c.scenario.radio.noise_power_w.has_value());
    CHECK(c.dual_gd.tolerance_w == 1e-3);
    CHECK(c.montecarlo.users.size() == 7);
    CHECK(c.montecarlo.samples == 200);
  }

  TEST_CASE("shipped default config equals the built-in defaults") {
    const SimulationConfig c = load_config_file(std::string(EMFBF_SOURCE_DIR) + "/configs/default.json");
    CHECK(config_to_json(c) == config_to_json(parse_config_text("{}")));
  }

  TEST_CASE("errors name the field") {
    CHECK(field_of(R"({"ue": {"cuont": 3}})") == "ue.cuont");
    CHECK(field_of(R"({"ue": {"count": "four"}})") == "ue.count");
    CHECK(field_of(R"({"ue": {"count": 2.5}})") == "ue.count");
    CHECK(field_of(R"({"radio": {"noise_power_w": "x"}})") == "radio.noise_power_w");
    CHECK(field_of(R"({"pattern": {"mode": "omni"}})") == "pattern.mode");
    CHECK(field_of(R"({"dual_gd": {"step_rule": "adam"}})") == "dual_gd.step_rule");
    CHECK(field_of(R"({"dual_gd": {"normalized_rate": 1.5}})") == "dual_gd.normalized_rate");
    CHECK(field_of(R"({"heatmap": {"resolution": 0}})") == "heatmap.resolution");
    CHECK(field_of(R"({"montecarlo": {"users": []}})") == "montecarlo.users");
    CHECK(field_of(R"({"seed": -3})") == "seed");
    CHECK(field_of(R"({"ue": 4})") == "ue");
    CHECK(field_of(R"({"ue": {)") == "<file>");
    CHECK(field_of("{}").empty());
  }

  TEST_CASE("config round trip") {
    const SimulationConfig c = parse_config_text(
        R"({"seed": 11, "radio": {"noise_power_w": 1e-12}, "ue": {"count": 2},
            "ris": {"assignment": [1, 0, 1]}, "dual_gd": {"step_rule": "fixed"},
            "pattern": {"mode": "isotropic"}, "montecarlo": {"users": [3, 5]}})");
    CHECK(c.scenario.radio.noise_power_w.value() == 1e-12);
    CHECK(c.dual_gd.step_rule == StepRule::kFixed);
    const json j = config_to_json(c);
    CHECK(config_to_json(config_from_json(j)) == j);
  }

  TEST_CASE("a run manifest is accepted as config") {
    SimulationConfig c = parse_config_text(R"({"ue": {"count": 3}})");
    c.seed = 99;
    const json manifest = {{"tool", "emfbf"}, {"seed", 99}, {"config", config_to_json(c)}, {"outputs", json::array()}};
    const SimulationConfig back = config_from_json(manifest);
    CHECK(back.seed == 99);
    CHECK(back.scenario.ue.count == 3);
  }

  TEST_CASE("scenario serialization is lossless") {
    const Scenario s = build_scenario(ScenarioConfig{}, 13);
    const json j = scenario_to_json(s);
    const Scenario back = scenario_from_json(json::parse(j.dump()));
    CHECK(scenario_to_json(back).dump() == j.dump());
    CHECK(build_channel(back).stacked == build_channel(s).stacked);
  }

  TEST_CASE("channel serialization is lossless") {
    const Scenario s = build_scenario(test::tiny_config(), 2);
    const ChannelSet ch = build_channel(s);
    const ChannelSet back = channel_from_json(json::parse(channel_to_json(ch).dump()));
    CHECK(back.stacked == ch.stacked);
    REQUIRE(back.per_user.size() == 1);
    CHECK(back.per_user[0] == ch.per_user[0]);
  }
}
