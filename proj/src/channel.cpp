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

#include "emfbf/channel.hpp"

#include <string>

#include "emfbf/errors.hpp"

namespace emfbf {

namespace {

Vec3 unit(const Vec3& v) { return v / v.norm(); }

cd phasor(double k, double path) { return std::polar(1.0, -k * path); }

}  // namespace

void configure_ris_weights(Scenario& s) {
  const double k = 2.0 * std::numbers::pi / s.radio.wavelength_m;
  for (auto& ris : s.ris) {
    const Vec3& target = s.ues.at(static_cast<size_t>(ris.served_ue)).center;
    const Vec3 dir = unit(target - ris.center);
    ris.weights.resize(ris.elements.size());
    for (size_t i = 0; i < ris.elements.size(); ++i) {
      ris.weights[i] = std::polar(1.0, k * dir.dot(ris.elements[i] - ris.center));
    }
  }
}

ChannelModel::ChannelModel(const Scenario& scenario)
    : scenario_(scenario),
      elements_(bs_element_positions(scenario.bs)),
      pattern_(scenario.bs, scenario.radio.wavelength_m, scenario.pattern,
               scenario.pattern_mode) {}

double ChannelModel::wave_number() const {
  return 2.0 * std::numbers::pi / scenario_.radio.wavelength_m;
}

double ChannelModel::bs_offset(const Vec3& target, const Vec3& element) const {
  const Vec3& a0 = scenario_.bs.center;
  const double proj = unit(target - a0).dot(element - a0);
  return scenario_.physical_bs_phase ? -proj : proj;
}

double ChannelModel::direct_phase(int m, int l, int n) const {
  const Vec3& am = elements_[static_cast<size_t>(m)].position;
  const auto& ue = scenario_.ues[static_cast<size_t>(l)];
  double path = unit(ue.center - am).dot(ue.elements[static_cast<size_t>(n)] - ue.center);
  if (scenario_.direct_path_bs_phase) path += bs_offset(ue.center, am);
  return path;
}

cd ChannelModel::path_gain_direct(int m, int l, int n) const {
  const auto& ue = scenario_.ues.at(static_cast<size_t>(l));
  const auto& el = elements_.at(static_cast<size_t>(m));
  const double f = pattern_.power_gain(ue.center - scenario_.bs.center, el.slant_deg);
  return f * ue.direct_gain * phasor(wave_number(), direct_phase(m, l, n));
}

cd ChannelModel::path_gain_scatterer(int m, int s, int l, int n) const {
  const Vec3& a0 = scenario_.bs.center;
  const auto& sc = scenario_.scatterers.at(static_cast<size_t>(s));
  const auto& ue = scenario_.ues.at(static_cast<size_t>(l));
  const auto& el = elements_.at(static_cast<size_t>(m));
  const double f = pattern_.power_gain(sc.position - a0, el.slant_deg);
  const double bs_side = bs_offset(sc.position, el.position);
  const double ue_side =
      unit(ue.center - sc.position).dot(ue.elements.at(static_cast<size_t>(n)) - ue.center);
  return f * sc.gain * phasor(wave_number(), bs_side + ue_side);
}

cd ChannelModel::path_gain_ris(int m, int z, int k, int l, int n) const {
  const Vec3& a0 = scenario_.bs.center;
  const auto& ris = scenario_.ris.at(static_cast<size_t>(z));
  const auto& ue = scenario_.ues.at(static_cast<size_t>(l));
  const auto& el = elements_.at(static_cast<size_t>(m));
  const Vec3 rk_off = ris.elements.at(static_cast<size_t>(k)) - ris.center;
  const Vec3 un_off = ue.elements.at(static_cast<size_t>(n)) - ue.center;
  const double f = pattern_.power_gain(ris.center - a0, el.slant_deg);
  const double bs_leg = bs_offset(ris.center, el.position) + unit(ris.center - a0).dot(rk_off);
  const double ue_leg = unit(ue.center - ris.center).dot(rk_off + un_off);
  const double kw = wave_number();
  return f * ris.reflection_amplitude * ris.gain * phasor(kw, bs_leg) *
         ris.weights.at(static_cast<size_t>(k)) * phasor(kw, ue_leg);
}

ChannelSet ChannelModel::build() const {
  const Scenario& s = scenario_;
  const Vec3& a0 = s.bs.center;
  const double kw = wave_number();
  const int m_count = static_cast<int>(elements_.size());

  for (const auto& ris : s.ris) {
    if (ris.weights.size() != ris.elements.size()) {
      throw Error("RIS weights are not configured");
    }
  }

  // BS-side factors F'_m * exp(-jk offset_m) per scatterer and per RIS.
  auto bs_row = [&](const Vec3& target) {
    Eigen::RowVectorXcd row(m_count);
    for (int m = 0; m < m_count; ++m) {
      const auto& el = elements_[static_cast<size_t>(m)];
      row(m) = pattern_.power_gain(target - a0, el.slant_deg) * phasor(kw, bs_offset(target, el.position));
    }
    return row;
  };
  std::vector<Eigen::RowVectorXcd> scatter_rows;
  for (const auto& sc : s.scatterers) scatter_rows.push_back(bs_row(sc.position));
  std::vector<Eigen::RowVectorXcd> ris_rows;
  for (const auto& ris : s.ris) ris_rows.push_back(bs_row(ris.center));

  ChannelSet out;
  const int n_count = s.ue_antennas();
  out.stacked.resize(static_cast<Eigen::Index>(s.ues.size()) * n_count, m_count);
  for (int l = 0; l < static_cast<int>(s.ues.size()); ++l) {
    const auto& ue = s.ues[static_cast<size_t>(l)];
    Eigen::MatrixXcd h(n_count, m_count);
    for (int m = 0; m < m_count; ++m) {
      const double f = pattern_.power_gain(ue.center - a0, elements_[static_cast<size_t>(m)].slant_deg);
      for (int n = 0; n < n_count; ++n) {
        h(n, m) = f * ue.direct_gain * phasor(kw, direct_phase(m, l, n));
      }
    }
    for (size_t i = 0; i < s.scatterers.size(); ++i) {
      const auto& sc = s.scatterers[i];
      const Vec3 d = unit(ue.center - sc.position);
      Eigen::VectorXcd col(n_count);
      for (int n = 0; n < n_count; ++n) {
        col(n) = sc.gain * phasor(kw, d.dot(ue.elements[static_cast<size_t>(n)] - ue.center));
      }
      h += col * scatter_rows[i];
    }
    for (size_t z = 0; z < s.ris.size(); ++z) {
      const auto& ris = s.ris[z];
      const Vec3 d_in = unit(ris.center - a0);
      const Vec3 d_out = unit(ue.center - ris.center);
      Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n_count);
      for (size_t k = 0; k < ris.elements.size(); ++k) {
        const Vec3 rk_off = ris.elements[k] - ris.center;
        const cd in = phasor(kw, d_in.dot(rk_off)) * ris.weights[k];
        for (int n = 0; n < n_count; ++n) {
          col(n) += in * phasor(kw, d_out.dot(rk_off + (ue.elements[static_cast<size_t>(n)] - ue.center)));
        }
      }
      col *= ris.reflection_amplitude * ris.gain;
      h += col * ris_rows[z];
    }
    out.stacked.middleRows(static_cast<Eigen::Index>(l) * n_count, n_count) = h;
    out.per_user.push_back(std::move(h));
  }
  return out;
}

Eigen::RowVectorXcd ChannelModel::observation(const Vec3& q) const {
  const double lambda = scenario_.radio.wavelength_m;
  const double kw = wave_number();
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(elements_.size()));
  for (size_t m = 0; m < elements_.size(); ++m) {
    const Vec3 d = q - elements_[m].position;
    const double dist = d.norm();
    if (!(dist > 0.0)) {
      throw SingularGeometry("observation point coincides with BS element " + std::to_string(m));
    }
    const double f = pattern_.power_gain(d, elements_[m].slant_deg);
    row(static_cast<Eigen::Index>(m)) =
        f * lambda / (4.0 * std::numbers::pi * dist) * phasor(kw, dist);
  }
  return row;
}

Eigen::MatrixXcd ChannelModel::observation(std::span<const Vec3> points) const {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(points.size()),
                       static_cast<Eigen::Index>(elements_.size()));
  for (size_t i = 0; i < points.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = observation(points[i]);
  }
  return out;
}

ChannelSet build_channel(const Scenario& scenario) { return ChannelModel(scenario).build(); }

Eigen::RowVectorXcd observation_channel(const Vec3& q, const Scenario& scenario) {
  return ChannelModel(scenario).observation(q);
}

cd path_gain_direct(int m, int l, int n, const Scenario& scenario) {
  return ChannelModel(scenario).path_gain_direct(m, l, n);
}

cd path_gain_scatterer(int m, int s, int l, int n, const Scenario& scenario) {
  return ChannelModel(scenario).path_gain_scatterer(m, s, l, n);
}

cd path_gain_ris(int m, int z, int k, int l, int n, const Scenario& scenario) {
  return ChannelModel(scenario).path_gain_ris(m, z, k, l, n);
}

}  // namespace emfbf
