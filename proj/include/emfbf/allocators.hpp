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
#include <span>

#include <Eigen/Dense>

#include "emfbf/errors.hpp"
#include "emfbf/precoder.hpp"

namespace emfbf {

/// Everything the EMF-aware allocators need about one precoder: the
/// per-point exposure quadratic forms and the per-layer power weights.
struct EmfContext {
  Eigen::MatrixXd exposure;  // N_Q x nu, E[k, i]
  Eigen::VectorXd g;         // nu
  double emf_threshold_w = 0.0;
  double max_power_w = 0.0;

  int points() const { return static_cast<int>(exposure.rows()); }
  int layers() const { return static_cast<int>(g.size()); }
};

/// Received power at every sampled point, E * P.
Eigen::VectorXd sampled_powers(const EmfContext& ctx, const Eigen::VectorXd& power);

/// Multiplier step rule for the dual iteration.
///
/// kFixed uses constant rates beta_0 = fixed_rate / P_max and
/// beta_k = fixed_rate / EMF_th. kNormalized divides each violated
/// constraint's step by the summed curvature of the violated set, so one
/// iteration moves the multipliers a fraction `normalized_rate` of a
/// diagonal Newton step.
enum class StepRule { kFixed, kNormalized };

struct DualGdConfig {
  double tolerance_w = 1e-3;
  int max_iterations = 200000;
  StepRule step_rule = StepRule::kNormalized;
  double fixed_rate = 1e-3;
  double normalized_rate = 0.5;
  /// Multipliers start uniform on (0, init_scale].
  double init_scale = 1e-6;
};

void validate(const DualGdConfig& cfg);

/// Raised when an iterative allocator hits its cap. Carries the last iterate.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& message, PowerAllocation last)
      : Error(message), last_(std::move(last)) {}
  const PowerAllocation& last_iterate() const noexcept { return last_; }

 private:
  PowerAllocation last_;
};

/// Capacity-optimal powers under sum_i P_i g_i <= P_max. The multiplier is
/// re-solved over the positive-power set until no layer goes negative; the
/// final multiplier is returned in `multipliers(0)`.
PowerAllocation waterfill(std::span<const double> lambda, std::span<const double> g,
                          double max_power_w, double noise_power_w);

/// min(EMF_th / max_Q P_Q, 1) for the given powers.
double reduction_factor(const EmfContext& ctx, const Eigen::VectorXd& power);

PowerAllocation reduce_allocation(const PowerAllocation& reference, const EmfContext& ctx);

/// Repeatedly scales the layer contributing most at the hottest sampled point
/// by EMF_th / P_Qmax. Stops once max_Q P_Q <= EMF_th (1 + relative_tolerance);
/// the per-step excess only decays geometrically, so an exact stop is not
/// reachable in floating point. Cap: 10 * nu * N_Q steps.
PowerAllocation enhance_allocation(const PowerAllocation& reference, const EmfContext& ctx,
                                   double relative_tolerance = 1e-9);

/// Projected dual iteration over the N_Q + 1 constraints. Each round sets
/// P_i = max(1 / (mu_0 g_i + sum_k mu_k E[k, i]) - N0 / lambda_i, 0), then
/// raises the multiplier of every constraint with F_k >= tolerance. Stops
/// when all F_k < tolerance; throws ConvergenceFailure at the cap and
/// NonFiniteValue if an iterate leaves the finite range.
PowerAllocation dual_gd_allocation(std::span<const double> lambda, double noise_power_w,
                                   const EmfContext& ctx, const DualGdConfig& cfg,
                                   std::uint64_t seed);

inline PowerAllocation dual_gd_allocation(const PrecoderState& state, double noise_power_w,
                                          const EmfContext& ctx, const DualGdConfig& cfg,
                                          std::uint64_t seed) {
  return dual_gd_allocation(as_span(state.lambda), noise_power_w, ctx, cfg, seed);
}

}  // namespace emfbf
