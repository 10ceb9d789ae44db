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

#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "emfbf/antenna.hpp"
#include "emfbf/errors.hpp"
#include "emfbf/types.hpp"

using namespace emfbf;

namespace {

constexpr double kLambda = kSpeedOfLight / 3.5e9;

BsArrayGeometry panel(double tilt) {
  BsArrayGeometry g;
  g.spacing_h_m = g.spacing_v_m = 0.5 * kLambda;
  g.pretilt_deg = tilt;
  return g;
}

}  // namespace

TEST_SUITE("antenna") {
  TEST_CASE("azimuth cut points") {
    CHECK(element_gain_azimuth_db(0.0) == doctest::Approx(0.0));
    CHECK(element_gain_azimuth_db(65.0) == doctest::Approx(-12.0));
    CHECK(element_gain_azimuth_db(180.0) == doctest::Approx(-30.0));
  }

  TEST_CASE("elevation cut points") {
    CHECK(element_gain_elevation_db(90.0) == doctest::Approx(0.0));
    CHECK(element_gain_elevation_db(25.0) == doctest::Approx(-12.0));
    CHECK(element_gain_elevation_db(0.0) == doctest::Approx(-12.0 * std::pow(90.0 / 65.0, 2)));
    CHECK(std::abs(element_gain_elevation_db(0.0) - (-23.01)) < 0.01);
  }

  TEST_CASE("combined element points") {
    CHECK(element_gain_db(90.0, 0.0) == doctest::Approx(8.0));
    CHECK(element_gain_db(90.0, 180.0) == doctest::Approx(-22.0));
    CHECK(element_gain_db(25.0, 65.0) == doctest::Approx(-16.0));
  }

  TEST_CASE("out of range angles throw") {
    CHECK_THROWS_AS(element_gain_azimuth_db(180.5), DomainError);
    CHECK_THROWS_AS(element_gain_azimuth_db(-181.0), DomainError);
    CHECK_THROWS_AS(element_gain_elevation_db(-0.1), DomainError);
    CHECK_THROWS_AS(element_gain_elevation_db(180.1), DomainError);
    CHECK_THROWS_AS(element_gain_azimuth_db(std::nan("")), DomainError);
  }

  TEST_CASE("cuts are even and bounded") {
    for (double x = 0.0; x <= 180.0; x += 0.25) {
      CHECK(element_gain_azimuth_db(x) == element_gain_azimuth_db(-x));
      if (x <= 90.0) CHECK(element_gain_elevation_db(90.0 + x) == element_gain_elevation_db(90.0 - x));
    }
    for (double t = 0.0; t <= 180.0; t += 5.0) {
      for (double p = -180.0; p <= 180.0; p += 5.0) {
        const double g = element_gain_db(t, p);
        CHECK(g <= 8.0 + 1e-12);
        CHECK(g >= -22.0 - 1e-12);
      }
    }
  }

  TEST_CASE("array factor without tilt progression") {
    const BsArrayGeometry g = panel(90.0);
    CHECK(array_factor_db(g, kLambda) == doctest::Approx(10.0 * std::log10(128.0 * 128.0 / 8.0)));
    CHECK(array_gain_db(90.0, 30.0, g, kLambda) ==
          doctest::Approx(element_gain_db(90.0, 30.0) + 10.0 * std::log10(2048.0)));
  }

  TEST_CASE("single element array has no array gain") {
    BsArrayGeometry g = panel(99.0);
    g.columns = 1;
    g.rows = 1;
    g.polarizations = 1;
    CHECK(array_factor_db(g, kLambda) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(array_gain_db(70.0, 20.0, g, kLambda) == doctest::Approx(element_gain_db(70.0, 20.0)));
  }

  TEST_CASE("array factor at 99 degrees matches a direct summation") {
    const BsArrayGeometry g = panel(99.0);
    const double k = 2.0 * std::numbers::pi / kLambda;
    const double c = std::cos(99.0 * std::numbers::pi / 180.0);
    std::complex<double> sum = 0.0;
    for (int m = 1; m <= 128; ++m) {
      sum += std::exp(std::complex<double>(0.0, -k * ((m % 8) - 1) * g.spacing_v_m * c)) / std::sqrt(8.0);
    }
    CHECK(array_factor_db(g, kLambda) == doctest::Approx(10.0 * std::log10(std::norm(sum))).epsilon(1e-12));
  }

  TEST_CASE("polarization splits power") {
    const BsArrayGeometry g = panel(90.0);
    CHECK(field_power_linear(90.0, 0.0, 0.0, g, kLambda) == doctest::Approx(0.0));
    const double peak = std::pow(10.0, (8.0 + array_factor_db(g, kLambda)) / 10.0);
    CHECK(field_power_linear(90.0, 0.0, 45.0, g, kLambda) == doctest::Approx(0.5 * peak));
    CHECK(field_power_linear(90.0, 0.0, -45.0, g, kLambda) ==
          doctest::Approx(field_power_linear(90.0, 0.0, 45.0, g, kLambda)));
    for (double t = 10.0; t < 180.0; t += 20.0) {
      for (double p = -170.0; p < 180.0; p += 40.0) {
        CHECK(field_power_linear(t, p, 45.0, g, kLambda) ==
              doctest::Approx(0.5 * field_power_linear(t, p, 90.0, g, kLambda)));
      }
    }
  }

  TEST_CASE("field power is monotone in azimuth on the horizon") {
    const BsArrayGeometry g = panel(90.0);
    double prev = field_power_linear(90.0, 0.0, 45.0, g, kLambda);
    for (double p = 0.5; p <= 180.0; p += 0.5) {
      const double cur = field_power_linear(90.0, p, 45.0, g, kLambda);
      CHECK(cur >= 0.0);
      CHECK(cur <= prev);
      prev = cur;
    }
  }

  TEST_CASE("local angles follow the panel frame") {
    LocalAngles a = local_angles(Vec3(1.0, 0.0, 0.0), 0.0);
    CHECK(a.theta_deg == doctest::Approx(90.0));
    CHECK(a.phi_deg == doctest::Approx(0.0));
    a = local_angles(Vec3(0.0, 0.0, -1.0), 0.0);
    CHECK(a.theta_deg == doctest::Approx(180.0));
    a = local_angles(Vec3(0.0, 1.0, 0.0), 90.0);
    CHECK(a.phi_deg == doctest::Approx(0.0).epsilon(1e-12));
    a = local_angles(Vec3(-1.0, 0.0, 0.0), 0.0);
    CHECK(std::abs(a.phi_deg) == doctest::Approx(180.0));
    a = local_angles(Vec3(1.0, 1.0, 0.0), 0.0);
    CHECK(a.phi_deg == doctest::Approx(45.0));
  }

  TEST_CASE("isotropic pattern ignores direction") {
    const BsArrayGeometry g = panel(90.0);
    RadiationPattern iso(g, kLambda, {}, PatternMode::kIsotropic);
    CHECK(iso.power_gain(Vec3(1.0, 2.0, -3.0), 45.0) == 1.0);
    RadiationPattern p(g, kLambda);
    CHECK(p.power_gain(Vec3(1.0, 0.0, 0.0), 45.0) ==
          doctest::Approx(field_power_linear(90.0, 0.0, 45.0, g, kLambda)));
  }
}
