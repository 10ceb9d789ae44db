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
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "emfbf/types.hpp"

namespace emfbf {

enum class Scheme { kReference, kReduced, kEnhanced, kDualGd };

inline constexpr Scheme kAllSchemes[] = {Scheme::kReference, Scheme::kReduced, Scheme::kEnhanced,
                                         Scheme::kDualGd};

std::string_view scheme_name(Scheme scheme);

/// Per-layer transmit powers P_i (the squared diagonal of the power
/// allocation matrix) plus provenance.
struct PowerAllocation {
  Eigen::VectorXd power;
  Scheme scheme = Scheme::kReference;
  int iterations = 0;
  bool converged = true;
  Eigen::VectorXd multipliers;  // dual_gd only: mu_0..mu_NQ
};

/// Thin SVD H = U diag(s) V^H with singular values in descending order.
struct UserSvd {
  Eigen::MatrixXcd u;               // N x N
  Eigen::VectorXd singular_values;  // N
  Eigen::MatrixXcd v;               // M x N
};

UserSvd svd_per_user(const Eigen::MatrixXcd& h);

struct LayerRef {
  int user;
  int index;  // position in the user's descending singular values
};

struct PrecoderState {
  std::vector<UserSvd> users;
  std::vector<LayerRef> layers;
  Eigen::VectorXd lambda;    // squared singular values of the selected layers
  Eigen::MatrixXcd v_tilde;  // nu x M, selected right-singular rows
  Eigen::MatrixXcd v_pinv;   // M x nu
  Eigen::VectorXd g;         // diag((V V^H)^-1)
  double condition_number = 1.0;  // of V V^H

  int layer_count() const { return static_cast<int>(layers.size()); }
};

inline constexpr double kMaxGramCondition = 1e12;

/// Keeps the `layers_per_user[l]` strongest directions of every user and forms
/// the zero-forcing pseudo-inverse V^H (V V^H)^-1 through a QR factorization
/// of V^H. Throws RankDeficient when a budget exceeds rank(H_l) or when the
/// Gram matrix condition number exceeds `max_condition`.
PrecoderState select_layers(std::vector<UserSvd> users, std::span<const int> layers_per_user,
                            double max_condition = kMaxGramCondition);

/// E[k, i] = |(H^{Q_k} V+)_i|^2 for every observation row of `hq`.
Eigen::MatrixXd exposure_forms(const Eigen::MatrixXcd& hq, const PrecoderState& state);

/// B = V+ diag(sqrt(P)).
Eigen::MatrixXcd compose_beamformer(const PrecoderState& state, const PowerAllocation& alloc);

/// sum_i P_i g_i, equal to tr[B B^H].
double transmit_power(const PrecoderState& state, const PowerAllocation& alloc);

/// omega * sum_i log2(1 + lambda_i P_i / N0), bits/s.
double capacity(std::span<const double> lambda, std::span<const double> power, double bandwidth_hz,
                double noise_power_w);
double capacity(const PrecoderState& state, const PowerAllocation& alloc, double bandwidth_hz,
                double noise_power_w);

/// lambda_i P_i / N0 in dB; -infinity for a layer with no power.
std::vector<double> sinr_per_layer_db(std::span<const double> lambda, std::span<const double> power,
                                      double noise_power_w);

/// 10 log10 of the summed linear per-layer SINR.
double total_sinr_db(std::span<const double> sinr_db);

/// |H^Q B|^2.
double received_power(const Eigen::RowVectorXcd& hq, const Eigen::MatrixXcd& b);

/// tr[Sigma^2 (H^Q V+)^H (H^Q V+)].
double received_power_trace(const Eigen::RowVectorXcd& hq, const PrecoderState& state,
                            const PowerAllocation& alloc);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

}  // namespace emfbf
