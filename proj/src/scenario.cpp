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

#include "emfbf/scenario.hpp"

#include <random>
#include <string>

#include "emfbf/channel.hpp"
#include "emfbf/errors.hpp"

namespace emfbf {

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw InvalidConfig(field, message);
}

// Circularly-symmetric complex Gaussian with E|x|^2 = 1.
cd draw_cn01(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

class Placer {
 public:
  Placer(const ScenarioConfig& cfg, std::mt19937_64& rng)
      : rng_(rng),
        origin_(cfg.bs.x_m, cfg.bs.y_m),
        r_min_(cfg.safety_circle.radius_m),
        r_max_(cfg.placement.cell_radius_m),
        az_center_(deg_to_rad(cfg.bs.boresight_azimuth_deg)),
        az_half_(deg_to_rad(cfg.placement.sector_half_width_deg)) {}

  // Area-uniform on the sector annulus, strictly outside the safety circle.
  Vec3 draw(double height) {
    std::uniform_real_distribution<double> r2(r_min_ * r_min_, r_max_ * r_max_);
    std::uniform_real_distribution<double> az(az_center_ - az_half_, az_center_ + az_half_);
    double r = 0.0;
    do {
      r = std::sqrt(r2(rng_));
    } while (r <= r_min_);
    const double a = az(rng_);
    return {origin_.x() + r * std::cos(a), origin_.y() + r * std::sin(a), height};
  }

  double orientation() {
    std::uniform_real_distribution<double> o(0.0, std::numbers::pi);
    return o(rng_);
  }

 private:
  std::mt19937_64& rng_;
  Eigen::Vector2d origin_;
  double r_min_;
  double r_max_;
  double az_center_;
  double az_half_;
};

}  // namespace

int Scenario::total_layers() const {
  int total = 0;
  for (const auto& ue : ues) total += ue.layers;
  return total;
}

void validate(const ScenarioConfig& c) {
  require(c.radio.carrier_frequency_hz > 0, "radio.carrier_frequency_hz", "must be positive");
  require(c.radio.bandwidth_hz > 0, "radio.bandwidth_hz", "must be positive");
  require(!c.radio.noise_power_w || *c.radio.noise_power_w > 0, "radio.noise_power_w",
          "must be positive");
  require(std::isfinite(c.radio.noise_figure_db), "radio.noise_figure_db", "must be finite");
  require(c.radio.max_transmit_power_w > 0, "radio.max_transmit_power_w", "must be positive");
  require(std::isfinite(c.radio.emf_threshold_dbm), "radio.emf_threshold_dbm", "must be finite");

  require(c.bs.columns >= 1, "bs.columns", "must be >= 1");
  require(c.bs.rows >= 1, "bs.rows", "must be >= 1");
  require(c.bs.height_m >= 0, "bs.height_m", "must be >= 0");
  require(c.bs.pretilt_deg >= 0 && c.bs.pretilt_deg <= 180, "bs.pretilt_deg",
          "must lie in [0, 180]");

  require(c.ue.count >= 1, "ue.count", "must be >= 1");
  require(c.ue.antennas >= 1, "ue.antennas", "must be >= 1");
  require(c.ue.layers >= 1, "ue.layers", "must be >= 1");
  require(c.ue.layers <= c.ue.antennas, "ue.layers", "must not exceed ue.antennas");
  require(c.ue.height_m >= 0, "ue.height_m", "must be >= 0");
  const int m = c.bs.columns * c.bs.rows * 2;
  require(c.ue.antennas <= m, "ue.antennas", "must not exceed the number of BS elements");
  require(c.ue.count * c.ue.layers <= m, "ue.layers",
          "total layers must not exceed the number of BS elements");

  require(c.scatterers.count >= 0, "scatterers.count", "must be >= 0");
  require(c.scatterers.height_m >= 0, "scatterers.height_m", "must be >= 0");

  require(c.ris.count >= 0, "ris.count", "must be >= 0");
  require(c.ris.elements >= 1, "ris.elements", "must be >= 1");
  require(c.ris.height_m >= 0, "ris.height_m", "must be >= 0");
  if (!c.ris.assignment.empty()) {
    require(static_cast<int>(c.ris.assignment.size()) == c.ris.count, "ris.assignment",
            "must list one UE index per RIS");
    for (int ue : c.ris.assignment) {
      require(ue >= 0 && ue < c.ue.count, "ris.assignment", "UE index out of range");
    }
  }

  require(c.placement.cell_radius_m > 0, "placement.cell_radius_m", "must be positive");
  require(c.placement.sector_half_width_deg > 0 && c.placement.sector_half_width_deg <= 180,
          "placement.sector_half_width_deg", "must lie in (0, 180]");

  require(c.safety_circle.radius_m > 0, "safety_circle.radius_m", "must be positive");
  require(c.safety_circle.samples >= 1, "safety_circle.samples", "must be >= 1");
  require(c.safety_circle.height_m >= 0, "safety_circle.height_m", "must be >= 0");

  require(c.pattern.phi_3db_deg > 0, "pattern.phi_3db_deg", "must be positive");
  require(c.pattern.theta_3db_deg > 0, "pattern.theta_3db_deg", "must be positive");
  require(c.pattern.max_attenuation_db >= 0, "pattern.max_attenuation_db", "must be >= 0");
  require(c.pattern.side_lobe_vertical_db >= 0, "pattern.side_lobe_vertical_db", "must be >= 0");
}

RadioConstants make_radio_constants(const RadioConfig& c) {
  RadioConstants r;
  r.carrier_frequency_hz = c.carrier_frequency_hz;
  r.wavelength_m = kSpeedOfLight / c.carrier_frequency_hz;
  r.bandwidth_hz = c.bandwidth_hz;
  r.noise_power_w = c.noise_power_w ? *c.noise_power_w
                                    : thermal_noise_watts(c.bandwidth_hz, c.noise_figure_db);
  r.max_transmit_power_w = c.max_transmit_power_w;
  r.emf_threshold_w = dbm_to_watts(c.emf_threshold_dbm);
  return r;
}

std::vector<BsElement> bs_element_positions(const BsArrayGeometry& g) {
  const double az = deg_to_rad(g.boresight_azimuth_deg);
  const Vec3 horizontal(-std::sin(az), std::cos(az), 0.0);
  const Vec3 vertical(0.0, 0.0, 1.0);
  std::vector<BsElement> out;
  out.reserve(static_cast<size_t>(g.element_count()));
  for (int h = 0; h < g.columns; ++h) {
    const double oh = (h - 0.5 * (g.columns - 1)) * g.spacing_h_m;
    for (int v = 0; v < g.rows; ++v) {
      const double ov = (v - 0.5 * (g.rows - 1)) * g.spacing_v_m;
      const Vec3 pos = g.center + oh * horizontal + ov * vertical;
      for (int p = 0; p < g.polarizations; ++p) {
        out.push_back({pos, g.slants_deg[static_cast<size_t>(p % 2)]});
      }
    }
  }
  return out;
}

SafetyCircle sample_safety_circle(const Vec3& bs_ground, double radius_m, int samples,
                                  double height_m) {
  SafetyCircle c;
  c.center = Vec3(bs_ground.x(), bs_ground.y(), 0.0);
  c.radius_m = radius_m;
  c.height_m = height_m;
  c.points.reserve(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double a = 2.0 * std::numbers::pi * k / samples;
    c.points.emplace_back(c.center.x() + radius_m * std::cos(a),
                          c.center.y() + radius_m * std::sin(a), height_m);
  }
  return c;
}

std::vector<Vec3> linear_array(const Vec3& center, int count, double spacing_m,
                               double orientation_rad) {
  const Vec3 axis(std::cos(orientation_rad), std::sin(orientation_rad), 0.0);
  std::vector<Vec3> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(center + (i - 0.5 * (count - 1)) * spacing_m * axis);
  }
  return out;
}

Scenario build_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  if (cfg.placement.cell_radius_m <= cfg.safety_circle.radius_m) {
    throw PlacementInfeasible("placement annulus is empty: cell radius " +
                              std::to_string(cfg.placement.cell_radius_m) +
                              " m does not exceed safety radius " +
                              std::to_string(cfg.safety_circle.radius_m) + " m");
  }

  Scenario s;
  s.seed = seed;
  s.radio = make_radio_constants(cfg.radio);
  s.pattern = cfg.pattern;
  s.pattern_mode = cfg.pattern_mode;
  s.direct_path_bs_phase = cfg.direct_path_bs_phase;
  s.physical_bs_phase = cfg.physical_bs_phase;

  const double half_wave = 0.5 * s.radio.wavelength_m;
  s.bs.columns = cfg.bs.columns;
  s.bs.rows = cfg.bs.rows;
  s.bs.polarizations = 2;
  s.bs.spacing_h_m = half_wave;
  s.bs.spacing_v_m = half_wave;
  s.bs.center = Vec3(cfg.bs.x_m, cfg.bs.y_m, cfg.bs.height_m);
  s.bs.pretilt_deg = cfg.bs.pretilt_deg;
  s.bs.boresight_azimuth_deg = cfg.bs.boresight_azimuth_deg;

  std::mt19937_64 rng(seed);
  Placer placer(cfg, rng);

  s.ues.reserve(static_cast<size_t>(cfg.ue.count));
  for (int l = 0; l < cfg.ue.count; ++l) {
    UserEquipment ue;
    ue.center = placer.draw(cfg.ue.height_m);
    ue.elements = linear_array(ue.center, cfg.ue.antennas, half_wave, placer.orientation());
    ue.layers = cfg.ue.layers;
    ue.direct_gain = draw_cn01(rng);
    s.ues.push_back(std::move(ue));
  }

  s.scatterers.reserve(static_cast<size_t>(cfg.scatterers.count));
  for (int i = 0; i < cfg.scatterers.count; ++i) {
    Scatterer sc;
    sc.position = placer.draw(cfg.scatterers.height_m);
    sc.gain = draw_cn01(rng);
    s.scatterers.push_back(sc);
  }

  s.ris.reserve(static_cast<size_t>(cfg.ris.count));
  for (int z = 0; z < cfg.ris.count; ++z) {
    Ris r;
    r.center = placer.draw(cfg.ris.height_m);
    r.elements = linear_array(r.center, cfg.ris.elements, half_wave, placer.orientation());
    r.gain = draw_cn01(rng);
    r.reflection_amplitude = 1.0 / cfg.ris.elements;
    r.served_ue = cfg.ris.assignment.empty() ? z % cfg.ue.count
                                             : cfg.ris.assignment[static_cast<size_t>(z)];
    r.weights.assign(static_cast<size_t>(cfg.ris.elements), cd{1.0, 0.0});
    s.ris.push_back(std::move(r));
  }

  s.circle = sample_safety_circle(s.bs.center, cfg.safety_circle.radius_m,
                                  cfg.safety_circle.samples, cfg.safety_circle.height_m);

  configure_ris_weights(s);
  return s;
}

}  // namespace emfbf
