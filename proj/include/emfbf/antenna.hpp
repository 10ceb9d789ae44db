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

#include <array>

#include "emfbf/types.hpp"

namespace emfbf {

/// Per-element radiation pattern parameters of the 3GPP panel model.
struct PatternConstants {
  double phi_3db_deg = 65.0;
  double theta_3db_deg = 65.0;
  double max_attenuation_db = 30.0;  // A_max
  double side_lobe_vertical_db = 30.0;  // SLA_V
  double element_peak_gain_db = 8.0;
};

enum class PatternMode { kThreeGpp, kIsotropic };

/// Uniform rectangular dual-polarized panel. Element index order is
/// m = p + P * (v + N_V * h): polarization innermost, then the vertical
/// position within a column, then the column.
struct BsArrayGeometry {
  int columns = 8;        // N_H
  int rows = 8;           // N_V, same-polarization elements per column
  int polarizations = 2;  // P
  double spacing_h_m = 0.0;
  double spacing_v_m = 0.0;
  Vec3 center = Vec3(0.0, 0.0, 25.0);
  double pretilt_deg = 90.0;
  /// Azimuth of the panel normal in the global frame, degrees from +x.
  double boresight_azimuth_deg = 0.0;
  std::array<double, 2> slants_deg = {45.0, -45.0};

  int element_count() const { return columns * rows * polarizations; }
};

/// Zenith/azimuth pair in the panel's local frame, degrees.
struct LocalAngles {
  double theta_deg;  // [0, 180], 90 is the horizon
  double phi_deg;    // [-180, 180], 0 is boresight
};

/// Horizontal cut, -min{12 (phi/phi_3dB)^2, A_max}. Throws DomainError
/// outside [-180, 180].
double element_gain_azimuth_db(double phi_deg, const PatternConstants& pc = {});

/// Vertical cut, -min{12 ((theta-90)/theta_3dB)^2, SLA_V}. Throws DomainError
/// outside [0, 180].
double element_gain_elevation_db(double theta_deg, const PatternConstants& pc = {});

/// Combined element pattern including the 8 dB peak gain.
double element_gain_db(double theta_deg, double phi_deg, const PatternConstants& pc = {});

/// 10 log10 |sum_m w_m|^2 for the pre-tilt weights
/// w_m = exp(-j 2pi/lambda (m % N_H - 1) d_V cos(tilt)) / sqrt(N_H), m 1-based.
double array_factor_db(const BsArrayGeometry& geom, double wavelength_m);

double array_gain_db(double theta_deg, double phi_deg, const BsArrayGeometry& geom,
                     double wavelength_m, const PatternConstants& pc = {});

/// Linear power pattern of one slanted element: 10^(A_Beam/10) * sin^2(zeta).
double field_power_linear(double theta_deg, double phi_deg, double zeta_deg,
                          const BsArrayGeometry& geom, double wavelength_m,
                          const PatternConstants& pc = {});

/// Angles of a global-frame direction as seen from the panel.
LocalAngles local_angles(const Vec3& direction, double boresight_azimuth_deg);

/// Radiation pattern bound to one panel. The array factor is computed once.
class RadiationPattern {
 public:
  RadiationPattern(const BsArrayGeometry& geom, double wavelength_m,
                   const PatternConstants& pc = {}, PatternMode mode = PatternMode::kThreeGpp);

  /// F' for a departure direction (global frame, need not be normalized).
  double power_gain(const Vec3& direction, double slant_deg) const;

  PatternMode mode() const { return mode_; }
  double array_factor_db() const { return array_factor_db_; }

 private:
  PatternConstants pc_;
  PatternMode mode_;
  double boresight_azimuth_deg_;
  double array_factor_db_;
};

}  // namespace emfbf
