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

#include "emfbf/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace emfbf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SchemeOutcome describe(const SnapshotResult& snap, PowerAllocation alloc, const Scenario& s) {
  SchemeOutcome o;
  o.scheme = alloc.scheme;
  o.capacity_bps = capacity(snap.state, alloc, s.radio.bandwidth_hz, s.radio.noise_power_w);
  o.sinr_db = sinr_per_layer_db(as_span(snap.state.lambda), as_span(alloc.power), s.radio.noise_power_w);
  o.total_sinr_db = total_sinr_db(o.sinr_db);
  o.transmit_power_w = transmit_power(snap.state, alloc);
  o.max_sampled_power_w =
      snap.context.points() ? sampled_powers(snap.context, alloc.power).maxCoeff() : 0.0;
  o.allocation = std::move(alloc);
  return o;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

}  // namespace

const SchemeOutcome& SnapshotResult::outcome(Scheme scheme) const {
  for (const auto& o : schemes) {
    if (o.scheme == scheme) return o;
  }
  throw Error("snapshot has no outcome for scheme " + std::string(scheme_name(scheme)));
}

Eigen::MatrixXcd SnapshotResult::beamformer(Scheme scheme) const {
  return compose_beamformer(state, outcome(scheme).allocation);
}

bool SnapshotResult::failed() const {
  return std::any_of(schemes.begin(), schemes.end(), [](const auto& o) { return o.failed; });
}

std::uint64_t dual_gd_seed(std::uint64_t scenario_seed) {
  return splitmix64(scenario_seed ^ 0x6475616c5f6764ULL);
}

SnapshotResult evaluate_snapshot(const Scenario& scenario, const DualGdConfig& cfg) {
  const ChannelModel model(scenario);
  const ChannelSet channel = model.build();

  std::vector<UserSvd> users;
  std::vector<int> budgets;
  for (size_t l = 0; l < scenario.ues.size(); ++l) {
    users.push_back(svd_per_user(channel.per_user[l]));
    budgets.push_back(scenario.ues[l].layers);
  }

  SnapshotResult snap;
  snap.state = select_layers(std::move(users), budgets);
  snap.observation = model.observation(scenario.circle.points);
  snap.context.exposure = exposure_forms(snap.observation, snap.state);
  snap.context.g = snap.state.g;
  snap.context.emf_threshold_w = scenario.radio.emf_threshold_w;
  snap.context.max_power_w = scenario.radio.max_transmit_power_w;

  const double n0 = scenario.radio.noise_power_w;
  const PowerAllocation reference =
      waterfill(as_span(snap.state.lambda), as_span(snap.state.g), snap.context.max_power_w, n0);
  snap.schemes.push_back(describe(snap, reference, scenario));
  snap.schemes.push_back(describe(snap, reduce_allocation(reference, snap.context), scenario));

  try {
    snap.schemes.push_back(describe(snap, enhance_allocation(reference, snap.context), scenario));
  } catch (const ConvergenceFailure& e) {
    snap.schemes.push_back(describe(snap, e.last_iterate(), scenario));
    snap.schemes.back().failed = true;
    snap.schemes.back().failure = e.what();
  }

  try {
    snap.schemes.push_back(describe(
        snap, dual_gd_allocation(snap.state, n0, snap.context, cfg, dual_gd_seed(scenario.seed)),
        scenario));
  } catch (const ConvergenceFailure& e) {
    snap.schemes.push_back(describe(snap, e.last_iterate(), scenario));
    snap.schemes.back().failed = true;
    snap.schemes.back().failure = e.what();
  }
  return snap;
}

HeatmapGrid power_heatmap(const Scenario& scenario,
                          std::span<const std::pair<Scheme, Eigen::MatrixXcd>> beamformers,
                          const GridSpec& spec) {
  HeatmapGrid grid;
  grid.spec = spec;
  const Eigen::Vector2d center =
      spec.center.value_or(Eigen::Vector2d(scenario.bs.center.x(), scenario.bs.center.y()));
  const double step = 2.0 * spec.extent_m / spec.resolution;
  for (int i = 0; i < spec.resolution; ++i) {
    grid.xs.push_back(center.x() - spec.extent_m + (i + 0.5) * step);
    grid.ys.push_back(center.y() - spec.extent_m + (i + 0.5) * step);
  }

  const ChannelModel model(scenario);
  const Eigen::Index cols = static_cast<Eigen::Index>(beamformers.size());
  Eigen::Index nu = 0;
  for (const auto& [scheme, b] : beamformers) {
    grid.schemes.push_back(scheme);
    grid.power.emplace_back(spec.resolution, spec.resolution);
    nu = b.cols();
  }
  if (cols == 0) return grid;

  const Eigen::Index m = static_cast<Eigen::Index>(model.elements().size());
  Eigen::MatrixXcd stacked(m, cols * nu);
  for (Eigen::Index s = 0; s < cols; ++s) {
    stacked.middleCols(s * nu, nu) = beamformers[static_cast<size_t>(s)].second;
  }

  std::vector<Vec3> row_points(static_cast<size_t>(spec.resolution));
  for (int iy = 0; iy < spec.resolution; ++iy) {
    for (int ix = 0; ix < spec.resolution; ++ix) {
      row_points[static_cast<size_t>(ix)] = Vec3(grid.xs[static_cast<size_t>(ix)],
                                                 grid.ys[static_cast<size_t>(iy)], spec.height_m);
    }
    const Eigen::MatrixXcd received = model.observation(row_points) * stacked;
    for (Eigen::Index s = 0; s < cols; ++s) {
      grid.power[static_cast<size_t>(s)].row(iy) =
          received.middleCols(s * nu, nu).rowwise().squaredNorm().transpose();
    }
  }
  return grid;
}

ExceedanceGrid exceedance_map(const HeatmapGrid& grid, double emf_threshold_w,
                              const SafetyCircle& circle) {
  ExceedanceGrid out;
  out.xs = grid.xs;
  out.ys = grid.ys;
  out.schemes = grid.schemes;
  const Eigen::Index ny = static_cast<Eigen::Index>(grid.ys.size());
  const Eigen::Index nx = static_cast<Eigen::Index>(grid.xs.size());
  for (const auto& power : grid.power) {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> flags(ny, nx);
    long count = 0;
    for (Eigen::Index iy = 0; iy < ny; ++iy) {
      for (Eigen::Index ix = 0; ix < nx; ++ix) {
        const double dx = grid.xs[static_cast<size_t>(ix)] - circle.center.x();
        const double dy = grid.ys[static_cast<size_t>(iy)] - circle.center.y();
        const bool outside = std::hypot(dx, dy) > circle.radius_m;
        const bool hot = outside && power(iy, ix) > emf_threshold_w;
        flags(iy, ix) = hot ? 1 : 0;
        count += hot;
      }
    }
    out.exceeds.push_back(std::move(flags));
    out.counts.push_back(count);
  }
  return out;
}

const MonteCarloAggregate& MonteCarloReport::aggregate(int l, Scheme scheme) const {
  for (const auto& a : aggregates) {
    if (a.users == l && a.scheme == scheme) return a;
  }
  throw Error("no aggregate for L=" + std::to_string(l));
}

std::uint64_t sample_seed(std::uint64_t base_seed, int users, int index) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(users)) << 32) |
      static_cast<std::uint32_t>(index);
  return splitmix64(base_seed ^ splitmix64(key));
}

MonteCarloReport monte_carlo(const ScenarioConfig& config, const DualGdConfig& cfg,
                             std::span<const int> users, int samples_per_l,
                             std::uint64_t base_seed, int workers) {
  if (samples_per_l < 1) throw InvalidConfig("montecarlo.samples", "must be >= 1");
  if (users.empty()) throw InvalidConfig("montecarlo.users", "must list at least one L");
  validate(cfg);

  std::vector<ScenarioConfig> per_l;
  for (int l : users) {
    ScenarioConfig c = config;
    c.ue.count = l;
    validate(c);
    per_l.push_back(std::move(c));
  }

  MonteCarloReport report;
  report.users.assign(users.begin(), users.end());
  report.samples_per_l = samples_per_l;
  report.base_seed = base_seed;
  const size_t total = users.size() * static_cast<size_t>(samples_per_l);
  report.samples.resize(total);

  auto run_one = [&](size_t task) {
    const size_t li = task / static_cast<size_t>(samples_per_l);
    MonteCarloSample& out = report.samples[task];
    out.users = users[li];
    out.index = static_cast<int>(task % static_cast<size_t>(samples_per_l));
    out.seed = sample_seed(base_seed, out.users, out.index);
    try {
      const Scenario scenario = build_scenario(per_l[li], out.seed);
      const SnapshotResult snap = evaluate_snapshot(scenario, cfg);
      const double c_ref = snap.outcome(Scheme::kReference).capacity_bps;
      for (const auto& o : snap.schemes) {
        SchemeMetrics m;
        m.transmit_power_w = o.transmit_power_w;
        m.capacity_bps = o.capacity_bps;
        m.loss_pct = c_ref > 0.0 ? 100.0 * (c_ref - o.capacity_bps) / c_ref : 0.0;
        m.max_sampled_power_w = o.max_sampled_power_w;
        m.iterations = o.allocation.iterations;
        m.converged = !o.failed;
        out.metrics.push_back(m);
        if (o.failed) {
          out.excluded = true;
          out.reason = o.failure;
        }
      }
    } catch (const std::exception& e) {
      out.excluded = true;
      out.reason = e.what();
      out.metrics.clear();
    }
  };

  int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, static_cast<int>(total));
  if (n_workers == 1) {
    for (size_t t = 0; t < total; ++t) run_one(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (size_t t = next++; t < total; t = next++) run_one(t);
      });
    }
  }

  for (size_t li = 0; li < users.size(); ++li) {
    for (size_t si = 0; si < std::size(kAllSchemes); ++si) {
      MonteCarloAggregate a;
      a.users = users[li];
      a.scheme = kAllSchemes[si];
      std::vector<double> power, cap, loss;
      for (int k = 0; k < samples_per_l; ++k) {
        const auto& s = report.samples[li * static_cast<size_t>(samples_per_l) + static_cast<size_t>(k)];
        if (s.excluded) {
          ++a.excluded;
          continue;
        }
        power.push_back(s.metrics[si].transmit_power_w);
        cap.push_back(s.metrics[si].capacity_bps);
        loss.push_back(s.metrics[si].loss_pct);
      }
      a.n = static_cast<int>(power.size());
      const Moments mp = moments(power), mc = moments(cap), ml = moments(loss);
      a.mean_power_w = mp.mean;
      a.std_power_w = mp.stddev;
      a.mean_capacity_bps = mc.mean;
      a.std_capacity_bps = mc.stddev;
      a.mean_loss_pct = ml.mean;
      a.std_loss_pct = ml.stddev;
      report.aggregates.push_back(a);
    }
  }
  return report;
}

}  // namespace emfbf
