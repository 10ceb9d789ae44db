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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "emfbf/antenna.hpp"
#include "emfbf/scenario.hpp"

namespace emfbf {

struct ChannelSet {
  std::vector<Eigen::MatrixXcd> per_user;  // N x M each
  Eigen::MatrixXcd stacked;                // N_t x M, users in order
};

/// Sets every RIS weight to the phase conjugate of its planar-wave offset
/// toward the served UE's array center, so the K reflections co-phase there.
void configure_ris_weights(Scenario& scenario);

/// Planar-wave path gains for one scenario. Holds the BS element layout and
/// the bound radiation pattern; indices are 0-based.
class ChannelModel {
 public:
  explicit ChannelModel(const Scenario& scenario);

  cd path_gain_direct(int m, int l, int n) const;
  cd path_gain_scatterer(int m, int s, int l, int n) const;
  cd path_gain_ris(int m, int z, int k, int l, int n) const;

  /// Direct + scatterer + RIS contributions, assembled per user.
  ChannelSet build() const;

  /// Free-space 1 x M channel to an observation point.
  Eigen::RowVectorXcd observation(const Vec3& q) const;
  /// One row per point.
  Eigen::MatrixXcd observation(std::span<const Vec3> points) const;

  const std::vector<BsElement>& elements() const { return elements_; }
  const RadiationPattern& pattern() const { return pattern_; }

 private:
  double wave_number() const;
  double direct_phase(int m, int l, int n) const;
  double bs_offset(const Vec3& target, const Vec3& element) const;

  const Scenario& scenario_;
  std::vector<BsElement> elements_;
  RadiationPattern pattern_;
};

ChannelSet build_channel(const Scenario& scenario);
Eigen::RowVectorXcd observation_channel(const Vec3& q, const Scenario& scenario);

cd path_gain_direct(int m, int l, int n, const Scenario& scenario);
cd path_gain_scatterer(int m, int s, int l, int n, const Scenario& scenario);
cd path_gain_ris(int m, int z, int k, int l, int n, const Scenario& scenario);

}  // namespace emfbf
