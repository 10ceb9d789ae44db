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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "emfbf/allocators.hpp"
#include "emfbf/channel.hpp"
#include "emfbf/precoder.hpp"
#include "emfbf/scenario.hpp"

namespace emfbf {

struct SchemeOutcome {
  Scheme scheme = Scheme::kReference;
  PowerAllocation allocation;
  double capacity_bps = 0.0;
  std::vector<double> sinr_db;
  double total_sinr_db = 0.0;
  double transmit_power_w = 0.0;
  double max_sampled_power_w = 0.0;
  bool failed = false;
  std::string failure;
};

struct SnapshotResult {
  PrecoderState state;
  EmfContext context;
  Eigen::MatrixXcd observation;  // N_Q x M, safety-circle channels
  std::vector<SchemeOutcome> schemes;  // in kAllSchemes order

  const SchemeOutcome& outcome(Scheme scheme) const;
  Eigen::MatrixXcd beamformer(Scheme scheme) const;
  bool failed() const;
};

/// Seed used for the dual iteration's multiplier draw in a snapshot.
std::uint64_t dual_gd_seed(std::uint64_t scenario_seed);

/// Runs channel construction, ZF precoding and all four allocators. A
/// dual-GD cap hit does not throw: the outcome is flagged `failed` and holds
/// the last iterate. RankDeficient propagates.
SnapshotResult evaluate_snapshot(const Scenario& scenario, const DualGdConfig& cfg);

struct GridSpec {
  double extent_m = 250.0;  // half-width of the square
  int resolution = 200;     // cells per axis
  double height_m = 1.5;
  std::optional<Eigen::Vector2d> center;  // BS ground position when unset
};

/// Received power per cell; power[s](iy, ix) for scheme index s.
struct HeatmapGrid {
  GridSpec spec;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<Scheme> schemes;
  std::vector<Eigen::MatrixXd> power;
};

HeatmapGrid power_heatmap(const Scenario& scenario,
                          std::span<const std::pair<Scheme, Eigen::MatrixXcd>> beamformers,
                          const GridSpec& spec);

struct ExceedanceGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<Scheme> schemes;
  std::vector<Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>> exceeds;
  std::vector<long> counts;
};

/// A cell is flagged when its power exceeds the threshold and it lies
/// outside the safety circle.
ExceedanceGrid exceedance_map(const HeatmapGrid& grid, double emf_threshold_w,
                              const SafetyCircle& circle);

// ---------------------------------------------------------------------------
// Monte Carlo

struct SchemeMetrics {
  double transmit_power_w = 0.0;
  double capacity_bps = 0.0;
  double loss_pct = 0.0;
  double max_sampled_power_w = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct MonteCarloSample {
  int users = 0;
  int index = 0;
  std::uint64_t seed = 0;
  bool excluded = false;
  std::string reason;
  std::vector<SchemeMetrics> metrics;  // kAllSchemes order, empty when excluded early
};

struct MonteCarloAggregate {
  int users = 0;
  Scheme scheme = Scheme::kReference;
  double mean_power_w = 0.0;
  double std_power_w = 0.0;
  double mean_capacity_bps = 0.0;
  double std_capacity_bps = 0.0;
  double mean_loss_pct = 0.0;
  double std_loss_pct = 0.0;
  int n = 0;
  int excluded = 0;
};

struct MonteCarloReport {
  std::vector<int> users;
  int samples_per_l = 0;
  std::uint64_t base_seed = 0;
  std::vector<MonteCarloSample> samples;  // ordered by (L, index)
  std::vector<MonteCarloAggregate> aggregates;

  const MonteCarloAggregate& aggregate(int users, Scheme scheme) const;
};

/// Snapshot seed for sample `index` at `users` UEs.
std::uint64_t sample_seed(std::uint64_t base_seed, int users, int index);

/// Independent seeded snapshots for every L in `users`. Samples whose precoder
/// is rank deficient or whose dual iteration fails are excluded from the means
/// of every scheme and counted. `workers` <= 0 picks the hardware concurrency.
MonteCarloReport monte_carlo(const ScenarioConfig& config, const DualGdConfig& cfg,
                             std::span<const int> users, int samples_per_l,
                             std::uint64_t base_seed, int workers = 0);

}  // namespace emfbf
