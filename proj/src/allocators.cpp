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

#include "emfbf/allocators.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace emfbf {

Eigen::VectorXd sampled_powers(const EmfContext& ctx, const Eigen::VectorXd& power) {
  return ctx.exposure * power;
}

void validate(const DualGdConfig& cfg) {
  if (!(cfg.tolerance_w > 0)) throw InvalidConfig("dual_gd.tolerance_w", "must be positive");
  if (cfg.max_iterations < 1) throw InvalidConfig("dual_gd.max_iterations", "must be >= 1");
  if (!(cfg.fixed_rate > 0 && cfg.fixed_rate < 1)) {
    throw InvalidConfig("dual_gd.fixed_rate", "must lie in (0, 1)");
  }
  if (!(cfg.normalized_rate > 0 && cfg.normalized_rate < 1)) {
    throw InvalidConfig("dual_gd.normalized_rate", "must lie in (0, 1)");
  }
  if (!(cfg.init_scale > 0)) throw InvalidConfig("dual_gd.init_scale", "must be positive");
}

PowerAllocation waterfill(std::span<const double> lambda, std::span<const double> g,
                          double max_power_w, double noise_power_w) {
  const size_t nu = lambda.size();
  if (g.size() != nu) throw Error("waterfill: lambda and g differ in length");
  for (size_t i = 0; i < nu; ++i) {
    if (!(lambda[i] > 0) || !(g[i] > 0)) {
      throw DomainError("waterfill: lambda and g must be positive");
    }
  }
  PowerAllocation out;
  out.scheme = Scheme::kReference;
  out.power = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nu));
  out.multipliers = Eigen::VectorXd::Zero(1);
  if (nu == 0 || max_power_w <= 0) return out;

  std::vector<bool> active(nu, true);
  double mu = 0.0;
  for (;;) {
    ++out.iterations;
    double floor_sum = 0.0;
    int count = 0;
    for (size_t i = 0; i < nu; ++i) {
      if (!active[i]) continue;
      floor_sum += noise_power_w * g[i] / lambda[i];
      ++count;
    }
    mu = count / (max_power_w + floor_sum);
    bool dropped = false;
    for (size_t i = 0; i < nu; ++i) {
      if (!active[i]) continue;
      if (1.0 / (mu * g[i]) - noise_power_w / lambda[i] <= 0.0) {
        active[i] = false;
        dropped = true;
      }
    }
    if (!dropped) break;
  }
  for (size_t i = 0; i < nu; ++i) {
    if (active[i]) {
      out.power(static_cast<Eigen::Index>(i)) = 1.0 / (mu * g[i]) - noise_power_w / lambda[i];
    }
  }
  out.multipliers(0) = mu;
  return out;
}

double reduction_factor(const EmfContext& ctx, const Eigen::VectorXd& power) {
  if (ctx.points() == 0) return 1.0;
  const double peak = sampled_powers(ctx, power).maxCoeff();
  if (!(peak > ctx.emf_threshold_w)) return 1.0;
  return ctx.emf_threshold_w / peak;
}

PowerAllocation reduce_allocation(const PowerAllocation& reference, const EmfContext& ctx) {
  PowerAllocation out;
  out.scheme = Scheme::kReduced;
  out.power = reduction_factor(ctx, reference.power) * reference.power;
  out.iterations = 1;
  return out;
}

PowerAllocation enhance_allocation(const PowerAllocation& reference, const EmfContext& ctx,
                                   double relative_tolerance) {
  PowerAllocation out;
  out.scheme = Scheme::kEnhanced;
  out.power = reference.power;
  if (ctx.points() == 0) return out;

  const double limit = ctx.emf_threshold_w * (1.0 + relative_tolerance);
  const long cap = 10L * ctx.layers() * ctx.points();
  for (long step = 0;; ++step) {
    const Eigen::VectorXd pq = sampled_powers(ctx, out.power);
    Eigen::Index hottest = 0;
    const double peak = pq.maxCoeff(&hottest);
    if (peak <= limit) break;
    if (step >= cap) {
      out.converged = false;
      throw ConvergenceFailure("enhanced allocation exceeded " + std::to_string(cap) + " steps",
                               out);
    }
    Eigen::Index layer = 0;
    out.power.cwiseProduct(ctx.exposure.row(hottest).transpose()).maxCoeff(&layer);
    out.power(layer) *= ctx.emf_threshold_w / peak;
    ++out.iterations;
  }
  return out;
}

PowerAllocation dual_gd_allocation(std::span<const double> lambda, double noise_power_w,
                                   const EmfContext& ctx, const DualGdConfig& cfg,
                                   std::uint64_t seed) {
  validate(cfg);
  const Eigen::Index nu = ctx.layers();
  const Eigen::Index nq = ctx.points();
  if (static_cast<Eigen::Index>(lambda.size()) != nu) {
    throw Error("dual_gd_allocation: lambda and g differ in length");
  }

  // Row 0 is the transmit-power constraint, rows 1..N_Q the EMF points.
  Eigen::MatrixXd coeff(nq + 1, nu);
  coeff.row(0) = ctx.g.transpose();
  coeff.bottomRows(nq) = ctx.exposure;
  Eigen::VectorXd limit(nq + 1);
  limit(0) = ctx.max_power_w;
  limit.tail(nq).setConstant(ctx.emf_threshold_w);
  Eigen::VectorXd noise_floor(nu);
  for (Eigen::Index i = 0; i < nu; ++i) noise_floor(i) = noise_power_w / lambda[static_cast<size_t>(i)];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd mu(nq + 1);
  for (Eigen::Index k = 0; k <= nq; ++k) mu(k) = cfg.init_scale * (1.0 - unif(rng));

  Eigen::VectorXd fixed_beta(nq + 1);
  fixed_beta(0) = cfg.fixed_rate / ctx.max_power_w;
  fixed_beta.tail(nq).setConstant(cfg.fixed_rate / ctx.emf_threshold_w);

  PowerAllocation out;
  out.scheme = Scheme::kDualGd;
  out.power.resize(nu);
  Eigen::VectorXd denom(nu);
  Eigen::VectorXd weight(nu);
  Eigen::VectorXd slack(nq + 1);
  std::vector<Eigen::Index> violated;

  for (int iter = 0;; ++iter) {
    denom = coeff.transpose() * mu;
    for (Eigen::Index i = 0; i < nu; ++i) {
      const double p = 1.0 / denom(i) - noise_floor(i);
      out.power(i) = p > 0.0 ? p : 0.0;
      weight(i) = p > 0.0 ? 1.0 / (denom(i) * denom(i)) : 0.0;
    }
    if (!out.power.allFinite()) {
      throw NonFiniteValue("dual_gd: non-finite power at iteration " + std::to_string(iter));
    }
    slack = coeff * out.power - limit;  // F_k

    violated.clear();
    for (Eigen::Index k = 0; k <= nq; ++k) {
      if (slack(k) >= cfg.tolerance_w) violated.push_back(k);
    }
    out.iterations = iter;
    out.multipliers = mu;
    if (violated.empty()) {
      out.converged = true;
      return out;
    }
    if (iter >= cfg.max_iterations) {
      out.converged = false;
      throw ConvergenceFailure("dual_gd did not converge in " + std::to_string(cfg.max_iterations) +
                                   " iterations",
                               out);
    }

    if (cfg.step_rule == StepRule::kFixed) {
      for (Eigen::Index k : violated) mu(k) = std::max(mu(k) + fixed_beta(k) * slack(k), 0.0);
    } else {
      // Curvature of F_k along the joint update direction of the violated set:
      // r_k = sum_i c_ki w_i sum_{j in V} c_ji.
      Eigen::VectorXd spread = Eigen::VectorXd::Zero(nu);
      for (Eigen::Index k : violated) spread += coeff.row(k).transpose();
      const Eigen::VectorXd ws = weight.cwiseProduct(spread);
      for (Eigen::Index k : violated) {
        const double curvature = coeff.row(k).dot(ws);
        const double beta = curvature > 0.0 ? cfg.normalized_rate / curvature : fixed_beta(k);
        mu(k) = std::max(mu(k) + beta * slack(k), 0.0);
      }
    }
    if (!mu.allFinite()) {
      throw NonFiniteValue("dual_gd: non-finite multiplier at iteration " + std::to_string(iter));
    }
  }
}

}  // namespace emfbf
