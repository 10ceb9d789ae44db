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

#include "emfbf/antenna.hpp"

#include <algorithm>
#include <string>

#include "emfbf/errors.hpp"

namespace emfbf {

double element_gain_azimuth_db(double phi_deg, const PatternConstants& pc) {
  if (!(phi_deg >= -180.0 && phi_deg <= 180.0)) {
    throw DomainError("azimuth " + std::to_string(phi_deg) + " deg outside [-180, 180]");
  }
  const double r = phi_deg / pc.phi_3db_deg;
  return -std::min(12.0 * r * r, pc.max_attenuation_db);
}

double element_gain_elevation_db(double theta_deg, const PatternConstants& pc) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw DomainError("zenith " + std::to_string(theta_deg) + " deg outside [0, 180]");
  }
  const double r = (theta_deg - 90.0) / pc.theta_3db_deg;
  return -std::min(12.0 * r * r, pc.side_lobe_vertical_db);
}

double element_gain_db(double theta_deg, double phi_deg, const PatternConstants& pc) {
  const double cuts = element_gain_elevation_db(theta_deg, pc) + element_gain_azimuth_db(phi_deg, pc);
  return pc.element_peak_gain_db - std::min(-cuts, pc.max_attenuation_db);
}

double array_factor_db(const BsArrayGeometry& geom, double wavelength_m) {
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  const double step = k * geom.spacing_v_m * std::cos(deg_to_rad(geom.pretilt_deg));
  const double amp = 1.0 / std::sqrt(static_cast<double>(geom.columns));
  cd sum{0.0, 0.0};
  const int count = geom.element_count();
  for (int m = 1; m <= count; ++m) {
    const double idx = static_cast<double>(m % geom.columns) - 1.0;
    sum += amp * std::polar(1.0, -step * idx);
  }
  return linear_to_db(std::norm(sum));
}

double array_gain_db(double theta_deg, double phi_deg, const BsArrayGeometry& geom,
                     double wavelength_m, const PatternConstants& pc) {
  return element_gain_db(theta_deg, phi_deg, pc) + array_factor_db(geom, wavelength_m);
}

double field_power_linear(double theta_deg, double phi_deg, double zeta_deg,
                          const BsArrayGeometry& geom, double wavelength_m,
                          const PatternConstants& pc) {
  const double s = std::sin(deg_to_rad(zeta_deg));
  return db_to_linear(array_gain_db(theta_deg, phi_deg, geom, wavelength_m, pc)) * s * s;
}

LocalAngles local_angles(const Vec3& direction, double boresight_azimuth_deg) {
  const double norm = direction.norm();
  const double cos_theta = std::clamp(direction.z() / norm, -1.0, 1.0);
  double phi = rad_to_deg(std::atan2(direction.y(), direction.x())) - boresight_azimuth_deg;
  // wrap into [-180, 180]
  phi = std::remainder(phi, 360.0);
  return {rad_to_deg(std::acos(cos_theta)), phi};
}

RadiationPattern::RadiationPattern(const BsArrayGeometry& geom, double wavelength_m,
                                   const PatternConstants& pc, PatternMode mode)
    : pc_(pc),
      mode_(mode),
      boresight_azimuth_deg_(geom.boresight_azimuth_deg),
      array_factor_db_(emfbf::array_factor_db(geom, wavelength_m)) {}

double RadiationPattern::power_gain(const Vec3& direction, double slant_deg) const {
  if (mode_ == PatternMode::kIsotropic) return 1.0;
  const LocalAngles a = local_angles(direction, boresight_azimuth_deg_);
  const double s = std::sin(deg_to_rad(slant_deg));
  return db_to_linear(element_gain_db(a.theta_deg, a.phi_deg, pc_) + array_factor_db_) * s * s;
}

}  // namespace emfbf
