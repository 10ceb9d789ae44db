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
#include <limits>
#include <vector>

#include <doctest.h>

#include "emfbf/channel.hpp"
#include "emfbf/evaluation.hpp"
#include "emfbf/scenario.hpp"

using namespace emfbf;

TEST_SUITE("evaluation") {
  TEST_CASE("schemes coincide when nothing violates") {
    ScenarioConfig c;
    c.ue.count = 1;
    c.ue.layers = 1;
    c.scatterers.count = 0;
    c.ris.count = 0;
    c.radio.emf_threshold_dbm = 200.0;
    const Scenario s = build_scenario(c, 4);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    const auto& ref = r.outcome(Scheme::kReference);
    for (Scheme sc : kAllSchemes) {
      const auto& o = r.outcome(sc);
      CHECK(o.transmit_power_w == doctest::Approx(ref.transmit_power_w).epsilon(1e-5));
      CHECK(o.capacity_bps == doctest::Approx(ref.capacity_bps).epsilon(1e-6));
    }
  }

  TEST_CASE("EMF-aware schemes honour the sampled limit") {
    DualGdConfig cfg;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const Scenario s = build_scenario(ScenarioConfig{}, seed);
      const SnapshotResult r = evaluate_snapshot(s, cfg);
      REQUIRE_FALSE(r.failed());
      const auto& ref = r.outcome(Scheme::kReference);
      CHECK(ref.transmit_power_w == doctest::Approx(s.radio.max_transmit_power_w));
      for (Scheme sc : {Scheme::kReduced, Scheme::kEnhanced, Scheme::kDualGd}) {
        const auto& o = r.outcome(sc);
        CHECK(o.max_sampled_power_w <= s.radio.emf_threshold_w + cfg.tolerance_w);
        CHECK(o.capacity_bps <= ref.capacity_bps * (1 + 1e-9));
        CHECK(o.sinr_db.size() == 8);
      }
      CHECK(r.outcome(Scheme::kEnhanced).transmit_power_w >=
            r.outcome(Scheme::kReduced).transmit_power_w * (1 - 1e-12));
    }
  }

  TEST_CASE("snapshot reports total SINR from the layer values") {
    const Scenario s = build_scenario(ScenarioConfig{}, 7);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    for (const auto& o : r.schemes) CHECK(o.total_sinr_db == doctest::Approx(total_sinr_db(o.sinr_db)));
  }

  TEST_CASE("dual iteration failure is flagged, not thrown") {
    DualGdConfig cfg;
    cfg.max_iterations = 1;
    const Scenario s = build_scenario(ScenarioConfig{}, 1);
    const SnapshotResult r = evaluate_snapshot(s, cfg);
    CHECK(r.failed());
    CHECK(r.outcome(Scheme::kDualGd).failed);
    CHECK_FALSE(r.outcome(Scheme::kReduced).failed);
  }

  TEST_CASE("heatmap cell on a circle sample reproduces the sampled power") {
    const Scenario s = build_scenario(ScenarioConfig{}, 3);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    const Vec3 q = s.circle.points[37];
    GridSpec spec;
    spec.extent_m = 1.0;
    spec.resolution = 1;
    spec.height_m = q.z();
    spec.center = Eigen::Vector2d(q.x(), q.y());
    std::vector<std::pair<Scheme, Eigen::MatrixXcd>> beams;
    for (Scheme sc : kAllSchemes) beams.emplace_back(sc, r.beamformer(sc));
    beams.emplace_back(Scheme::kReference, Eigen::MatrixXcd::Zero(128, 8));
    const HeatmapGrid g = power_heatmap(s, beams, spec);
    REQUIRE(g.power.size() == 5);
    for (size_t i = 0; i < 4; ++i) {
      const double expect = (r.context.exposure.row(37) * r.outcome(kAllSchemes[i]).allocation.power)(0);
      CHECK(std::abs(g.power[i](0, 0) - expect) <= 1e-10 * expect);
    }
    CHECK(g.power[4](0, 0) == 0.0);
  }

  TEST_CASE("heatmap matches the independent norm form") {
    const Scenario s = build_scenario(ScenarioConfig{}, 5);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    GridSpec spec;
    spec.extent_m = 120.0;
    spec.resolution = 6;
    std::vector<std::pair<Scheme, Eigen::MatrixXcd>> beams = {{Scheme::kDualGd, r.beamformer(Scheme::kDualGd)}};
    const HeatmapGrid g = power_heatmap(s, beams, spec);
    REQUIRE(g.xs.size() == 6);
    for (size_t iy = 0; iy < 6; ++iy) {
      for (size_t ix = 0; ix < 6; ++ix) {
        const Vec3 q(g.xs[ix], g.ys[iy], 1.5);
        const double p = (observation_channel(q, s) * beams[0].second).squaredNorm();
        CHECK(g.power[0](static_cast<Eigen::Index>(iy), static_cast<Eigen::Index>(ix)) ==
              doctest::Approx(p).epsilon(1e-10));
        CHECK(p >= 0.0);
      }
    }
  }

  TEST_CASE("exceedance respects threshold and exclusion zone") {
    const Scenario s = build_scenario(ScenarioConfig{}, 6);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    std::vector<std::pair<Scheme, Eigen::MatrixXcd>> beams = {{Scheme::kReference, r.beamformer(Scheme::kReference)}};
    GridSpec wide;
    wide.resolution = 40;
    const HeatmapGrid g = power_heatmap(s, beams, wide);
    const ExceedanceGrid none = exceedance_map(g, std::numeric_limits<double>::infinity(), s.circle);
    CHECK(none.counts[0] == 0);
    const ExceedanceGrid all = exceedance_map(g, 0.0, s.circle);
    long outside = 0;
    for (double y : g.ys) {
      for (double x : g.xs) outside += std::hypot(x, y) > s.circle.radius_m ? 1 : 0;
    }
    CHECK(all.counts[0] == outside);
    GridSpec inner;
    inner.extent_m = 30.0;
    inner.resolution = 10;
    const HeatmapGrid gi = power_heatmap(s, beams, inner);
    CHECK(exceedance_map(gi, 0.0, s.circle).counts[0] == 0);
  }

  TEST_CASE("monte carlo with one sample equals the snapshot") {
    const ScenarioConfig c;
    const std::vector<int> users = {4};
    const MonteCarloReport rep = monte_carlo(c, DualGdConfig{}, users, 1, 17, 1);
    REQUIRE(rep.samples.size() == 1);
    const auto& smp = rep.samples[0];
    CHECK(smp.seed == sample_seed(17, 4, 0));
    const Scenario s = build_scenario(c, smp.seed);
    const SnapshotResult r = evaluate_snapshot(s, DualGdConfig{});
    for (size_t k = 0; k < 4; ++k) {
      const auto& a = rep.aggregate(4, kAllSchemes[k]);
      CHECK(a.n == 1);
      CHECK(a.mean_power_w == r.outcome(kAllSchemes[k]).transmit_power_w);
      CHECK(a.mean_capacity_bps == r.outcome(kAllSchemes[k]).capacity_bps);
    }
    CHECK(rep.aggregate(4, Scheme::kReference).mean_loss_pct == 0.0);
  }

  TEST_CASE("monte carlo is deterministic and independent of worker count") {
    const ScenarioConfig c;
    const std::vector<int> users = {3, 5};
    const MonteCarloReport a = monte_carlo(c, DualGdConfig{}, users, 6, 2, 1);
    const MonteCarloReport b = monte_carlo(c, DualGdConfig{}, users, 6, 2, 3);
    REQUIRE(a.samples.size() == 12);
    REQUIRE(a.aggregates.size() == b.aggregates.size());
    for (size_t i = 0; i < a.aggregates.size(); ++i) {
      CHECK(a.aggregates[i].mean_power_w == b.aggregates[i].mean_power_w);
      CHECK(a.aggregates[i].mean_capacity_bps == b.aggregates[i].mean_capacity_bps);
      CHECK(a.aggregates[i].mean_loss_pct == b.aggregates[i].mean_loss_pct);
      CHECK(a.aggregates[i].n + a.aggregates[i].excluded == 6);
    }
    for (const auto& smp : a.samples) {
      if (smp.excluded) continue;
      for (const auto& m : smp.metrics) CHECK(m.loss_pct >= -1e-9);
    }
  }

  TEST_CASE("sample seeds differ across L and index") {
    CHECK(sample_seed(1, 3, 0) != sample_seed(1, 4, 0));
    CHECK(sample_seed(1, 3, 0) != sample_seed(1, 3, 1));
    CHECK(sample_seed(1, 3, 0) != sample_seed(2, 3, 0));
    CHECK(dual_gd_seed(5) != dual_gd_seed(6));
  }
}
