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

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "emfbf/scenario.hpp"

namespace emfbf::test {

inline constexpr double kPi = std::numbers::pi;

// Independent evaluation of the 3GPP pattern for a global direction.
inline double oracle_gain(const Scenario& s, const Vec3& dir, double slant_deg) {
  if (s.pattern_mode == PatternMode::kIsotropic) return 1.0;
  const double theta = std::acos(dir.z() / dir.norm()) * 180.0 / kPi;
  double phi = std::atan2(dir.y(), dir.x()) * 180.0 / kPi - s.bs.boresight_azimuth_deg;
  while (phi > 180.0) phi -= 360.0;
  while (phi < -180.0) phi += 360.0;
  const double av = -std::min(12.0 * std::pow((theta - 90.0) / 65.0, 2), 30.0);
  const double ah = -std::min(12.0 * std::pow(phi / 65.0, 2), 30.0);
  const double elem = 8.0 - std::min(-(av + ah), 30.0);
  const int nh = s.bs.columns;
  const int m_total = s.bs.element_count();
  const double k = 2.0 * kPi / s.radio.wavelength_m;
  std::complex<double> sum = 0.0;
  for (int m = 1; m <= m_total; ++m) {
    sum += std::polar(1.0 / std::sqrt(static_cast<double>(nh)),
                      -k * ((m % nh) - 1) * s.bs.spacing_v_m * std::cos(s.bs.pretilt_deg * kPi / 180.0));
  }
  const double beam = elem + 10.0 * std::log10(std::norm(sum));
  const double sz = std::sin(slant_deg * kPi / 180.0);
  return std::pow(10.0, beam / 10.0) * sz * sz;
}

// Entry-by-entry channel from the path formulas, looping over every
// (n, m, s, z, k) term.
inline Eigen::MatrixXcd oracle_channel(const Scenario& s, int l) {
  const auto els = bs_element_positions(s.bs);
  const Vec3& a0 = s.bs.center;
  const double k = 2.0 * kPi / s.radio.wavelength_m;
  const double bs_sign = s.physical_bs_phase ? -1.0 : 1.0;
  const auto& ue = s.ues[static_cast<size_t>(l)];
  const Vec3& u0 = ue.center;
  auto e = [&](double path) { return std::polar(1.0, -k * path); };
  Eigen::MatrixXcd h(static_cast<Eigen::Index>(ue.elements.size()), static_cast<Eigen::Index>(els.size()));
  for (size_t n = 0; n < ue.elements.size(); ++n) {
    const Vec3 un = ue.elements[n] - u0;
    for (size_t m = 0; m < els.size(); ++m) {
      const Vec3 am = els[m].position - a0;
      const Vec3 to_ue = u0 - els[m].position;
      double direct = to_ue.dot(un) / to_ue.norm();
      if (s.direct_path_bs_phase) direct += bs_sign * (u0 - a0).dot(am) / (u0 - a0).norm();
      std::complex<double> acc = oracle_gain(s, u0 - a0, els[m].slant_deg) * ue.direct_gain * e(direct);
      for (const auto& sc : s.scatterers) {
        const Vec3 in = sc.position - a0;
        const Vec3 out = u0 - sc.position;
        const double path = bs_sign * in.dot(am) / in.norm() + out.dot(un) / out.norm();
        acc += oracle_gain(s, in, els[m].slant_deg) * sc.gain * e(path);
      }
      for (const auto& r : s.ris) {
        const Vec3 in = r.center - a0;
        const Vec3 out = u0 - r.center;
        for (size_t kk = 0; kk < r.elements.size(); ++kk) {
          const Vec3 rk = r.elements[kk] - r.center;
          const double leg1 = bs_sign * in.dot(am) / in.norm() + in.dot(rk) / in.norm();
          const double leg2 = out.dot(rk + un) / out.norm();
          acc += oracle_gain(s, in, els[m].slant_deg) * r.reflection_amplitude * r.gain * e(leg1) *
                 r.weights[kk] * e(leg2);
        }
      }
      h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = acc;
    }
  }
  return h;
}

}  // namespace emfbf::test
