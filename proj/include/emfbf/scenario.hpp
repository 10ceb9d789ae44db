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
#include <optional>
#include <vector>

#include "emfbf/antenna.hpp"
#include "emfbf/types.hpp"

namespace emfbf {

struct RadioConstants {
  double carrier_frequency_hz = 0.0;
  double wavelength_m = 0.0;
  double bandwidth_hz = 0.0;
  double noise_power_w = 0.0;
  double max_transmit_power_w = 0.0;
  double emf_threshold_w = 0.0;
};

struct UserEquipment {
  Vec3 center;
  std::vector<Vec3> elements;
  int layers = 0;
  cd direct_gain;  // sigma
};

struct Scatterer {
  Vec3 position;
  cd gain;  // beta(s)
};

struct Ris {
  Vec3 center;
  std::vector<Vec3> elements;
  cd gain;  // epsilon(R_0)
  double reflection_amplitude = 0.0;  // 1/K
  std::vector<cd> weights;            // unit modulus once configured
  int served_ue = 0;
};

struct SafetyCircle {
  Vec3 center;  // BS ground position
  double radius_m = 0.0;
  double height_m = 0.0;
  std::vector<Vec3> points;
};

struct Scenario {
  RadioConstants radio;
  BsArrayGeometry bs;
  PatternConstants pattern;
  PatternMode pattern_mode = PatternMode::kThreeGpp;
  /// Adds the BS-side planar offset to the direct-path phase. Without it the
  /// direct path is constant across BS elements.
  bool direct_path_bs_phase = true;
  /// BS-side planar offsets enter with the sign of the true path-length
  /// difference, matching the free-space observation channel. When false the
  /// offsets are added as printed, which steers beams to the mirror image.
  bool physical_bs_phase = true;
  std::vector<UserEquipment> ues;
  std::vector<Scatterer> scatterers;
  std::vector<Ris> ris;
  SafetyCircle circle;
  std::uint64_t seed = 0;

  int total_layers() const;
  int ue_antennas() const { return ues.empty() ? 0 : static_cast<int>(ues.front().elements.size()); }
};

// ---------------------------------------------------------------------------
// Configuration. Defaults reproduce the reference deployment: an 8x8
// cross-polarized panel at 25 m, four 4-antenna UEs with two layers each,
// three scatterers, three 4-element RISs, a 50 m safety circle.

struct RadioConfig {
  double carrier_frequency_hz = 3.5e9;
  double bandwidth_hz = 100e6;
  std::optional<double> noise_power_w;  // derived from noise_figure_db if unset
  double noise_figure_db = 9.0;
  double max_transmit_power_w = 200.0;
  double emf_threshold_dbm = 52.0;
};

struct PanelConfig {
  int columns = 8;
  int rows = 8;
  double x_m = 0.0;
  double y_m = 0.0;
  double height_m = 25.0;
  double pretilt_deg = 90.0;
  double boresight_azimuth_deg = 0.0;
};

struct UeConfig {
  int count = 4;
  int antennas = 4;
  int layers = 2;
  double height_m = 1.5;
};

struct ScattererConfig {
  int count = 3;
  double height_m = 1.5;
};

struct RisConfig {
  int count = 3;
  int elements = 4;
  double height_m = 1.5;
  /// Optional explicit RIS -> UE assignment; round-robin (z mod L) when empty.
  std::vector<int> assignment;
};

struct PlacementConfig {
  double cell_radius_m = 250.0;
  /// Entities are drawn within +/- this azimuth around the panel boresight.
  double sector_half_width_deg = 60.0;
};

struct SafetyCircleConfig {
  double radius_m = 50.0;
  int samples = 360;
  double height_m = 1.5;
};

struct ScenarioConfig {
  RadioConfig radio;
  PanelConfig bs;
  UeConfig ue;
  ScattererConfig scatterers;
  RisConfig ris;
  PlacementConfig placement;
  SafetyCircleConfig safety_circle;
  PatternConstants pattern;
  PatternMode pattern_mode = PatternMode::kThreeGpp;
  bool direct_path_bs_phase = true;
  bool physical_bs_phase = true;
};

/// Throws InvalidConfig naming the first offending field.
void validate(const ScenarioConfig& config);

RadioConstants make_radio_constants(const RadioConfig& config);

/// Draws one snapshot. Pure in (config, seed). RIS weights are configured.
Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed);

struct BsElement {
  Vec3 position;
  double slant_deg;
};

/// All M elements in index order m = p + P (v + N_V h).
std::vector<BsElement> bs_element_positions(const BsArrayGeometry& geom);

/// N_Q points at bearings 2 pi k / N_Q, k = 0..N_Q-1.
SafetyCircle sample_safety_circle(const Vec3& bs_ground, double radius_m, int samples,
                                  double height_m);

/// Positions of a horizontal uniform linear array centered on `center`.
std::vector<Vec3> linear_array(const Vec3& center, int count, double spacing_m,
                               double orientation_rad);

}  // namespace emfbf
