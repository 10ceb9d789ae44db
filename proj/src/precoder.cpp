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

#include "emfbf/precoder.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "emfbf/errors.hpp"

namespace emfbf {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kReference: return "reference";
    case Scheme::kReduced: return "reduced";
    case Scheme::kEnhanced: return "enhanced";
    case Scheme::kDualGd: return "dual_gd";
  }
  return "unknown";
}

UserSvd svd_per_user(const Eigen::MatrixXcd& h) {
  if (h.rows() > h.cols()) {
    throw NumericalFailure("svd_per_user expects N <= M, got " + std::to_string(h.rows()) + "x" +
                           std::to_string(h.cols()));
  }
  if (!h.allFinite()) throw NumericalFailure("channel matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

PrecoderState select_layers(std::vector<UserSvd> users, std::span<const int> layers_per_user,
                            double max_condition) {
  if (users.size() != layers_per_user.size()) {
    throw Error("select_layers: one layer budget per user required");
  }
  PrecoderState st;
  int total = 0;
  Eigen::Index m_count = 0;
  for (size_t l = 0; l < users.size(); ++l) {
    const auto& s = users[l].singular_values;
    m_count = users[l].v.rows();
    const double tol = static_cast<double>(std::max(users[l].u.rows(), users[l].v.rows())) *
                       std::numeric_limits<double>::epsilon() * (s.size() ? s(0) : 0.0);
    const int rank = static_cast<int>((s.array() > tol).count());
    if (layers_per_user[l] > rank) {
      throw RankDeficient("user " + std::to_string(l) + " requests " +
                              std::to_string(layers_per_user[l]) + " layers but rank is " +
                              std::to_string(rank),
                          std::numeric_limits<double>::infinity());
    }
    total += layers_per_user[l];
  }

  st.lambda.resize(total);
  st.v_tilde.resize(total, m_count);
  int row = 0;
  for (size_t l = 0; l < users.size(); ++l) {
    for (int j = 0; j < layers_per_user[l]; ++j) {
      st.layers.push_back({static_cast<int>(l), j});
      const double sv = users[l].singular_values(j);
      st.lambda(row) = sv * sv;
      st.v_tilde.row(row) = users[l].v.col(j).adjoint();
      ++row;
    }
  }
  st.users = std::move(users);

  // V^H = Q R  =>  V V^H = R^H R  and  V+ = Q R^-H.
  const Eigen::MatrixXcd vh = st.v_tilde.adjoint();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(vh);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(total).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(r).singularValues();
  const double smin = sv(total - 1);
  st.condition_number = smin > 0.0 ? (sv(0) / smin) * (sv(0) / smin)
                                   : std::numeric_limits<double>::infinity();
  if (!(st.condition_number <= max_condition)) {
    throw RankDeficient("layer Gram matrix is singular (condition number " +
                            std::to_string(st.condition_number) + ")",
                        st.condition_number);
  }
  const Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(vh.rows(), total);
  // R^H X = I  =>  X = R^-H
  const Eigen::MatrixXcd r_inv_h = r.adjoint().triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXcd::Identity(total, total));
  st.v_pinv = q * r_inv_h;
  st.g = st.v_pinv.colwise().squaredNorm().transpose();
  return st;
}

Eigen::MatrixXd exposure_forms(const Eigen::MatrixXcd& hq, const PrecoderState& state) {
  return (hq * state.v_pinv).cwiseAbs2();
}

Eigen::MatrixXcd compose_beamformer(const PrecoderState& state, const PowerAllocation& alloc) {
  return state.v_pinv * alloc.power.cwiseSqrt().cast<cd>().asDiagonal();
}

double transmit_power(const PrecoderState& state, const PowerAllocation& alloc) {
  return alloc.power.dot(state.g);
}

double capacity(std::span<const double> lambda, std::span<const double> power, double bandwidth_hz,
                double noise_power_w) {
  double bits = 0.0;
  for (size_t i = 0; i < lambda.size(); ++i) {
    bits += std::log1p(lambda[i] * power[i] / noise_power_w);
  }
  return bandwidth_hz * bits / std::numbers::ln2;
}

double capacity(const PrecoderState& state, const PowerAllocation& alloc, double bandwidth_hz,
                double noise_power_w) {
  return capacity(as_span(state.lambda), as_span(alloc.power), bandwidth_hz, noise_power_w);
}

std::vector<double> sinr_per_layer_db(std::span<const double> lambda, std::span<const double> power,
                                      double noise_power_w) {
  std::vector<double> out(lambda.size());
  for (size_t i = 0; i < lambda.size(); ++i) {
    const double lin = lambda[i] * power[i] / noise_power_w;
    out[i] = lin > 0.0 ? 10.0 * std::log10(lin) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

double total_sinr_db(std::span<const double> sinr_db) {
  double sum = 0.0;
  for (double v : sinr_db) sum += std::isinf(v) && v < 0 ? 0.0 : std::pow(10.0, v / 10.0);
  return sum > 0.0 ? 10.0 * std::log10(sum) : -std::numeric_limits<double>::infinity();
}

double received_power(const Eigen::RowVectorXcd& hq, const Eigen::MatrixXcd& b) {
  return (hq * b).squaredNorm();
}

double received_power_trace(const Eigen::RowVectorXcd& hq, const PrecoderState& state,
                            const PowerAllocation& alloc) {
  const Eigen::RowVectorXcd a = hq * state.v_pinv;
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) tr += alloc.power(i) * gram(i, i).real();
  return tr;
}

}  // namespace emfbf
