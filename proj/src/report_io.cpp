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

#include "emfbf/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "emfbf/antenna.hpp"
#include "emfbf/errors.hpp"
#include "emfbf/types.hpp"

namespace emfbf {

using nlohmann::json;

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double dbm_or_floor(double watts) {
  return watts > 0.0 ? watts_to_dbm(watts) : -std::numeric_limits<double>::infinity();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(finite_or_null(v(i)));
  return a;
}

}  // namespace

std::string heatmap_csv(const HeatmapGrid& grid) {
  std::ostringstream os;
  os << "x,y,scheme,power_dBm\n";
  for (std::size_t s = 0; s < grid.schemes.size(); ++s) {
    const std::string name(scheme_name(grid.schemes[s]));
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
      for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
        os << format_number(grid.xs[ix]) << ',' << format_number(grid.ys[iy]) << ',' << name << ','
           << format_number(dbm_or_floor(grid.power[s](iy, ix))) << '\n';
      }
    }
  }
  return os.str();
}

std::string exceedance_csv(const ExceedanceGrid& grid) {
  std::ostringstream os;
  os << "x,y,scheme,exceeds\n";
  for (std::size_t s = 0; s < grid.schemes.size(); ++s) {
    const std::string name(scheme_name(grid.schemes[s]));
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy) {
      for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
        os << format_number(grid.xs[ix]) << ',' << format_number(grid.ys[iy]) << ',' << name << ','
           << static_cast<int>(grid.exceeds[s](iy, ix)) << '\n';
      }
    }
  }
  return os.str();
}

json snapshot_report_json(const Scenario& scenario, const SnapshotResult& result,
                          const ExceedanceGrid& exceedance) {
  json schemes = json::array();
  for (const auto& o : result.schemes) {
    long cells = 0;
    for (std::size_t s = 0; s < exceedance.schemes.size(); ++s) {
      if (exceedance.schemes[s] == o.scheme) cells = exceedance.counts[s];
    }
    json sinr = json::array();
    for (double v : o.sinr_db) sinr.push_back(finite_or_null(v));
    schemes.push_back({
        {"scheme", scheme_name(o.scheme)},
        {"power_w", vector_json(o.allocation.power)},
        {"transmit_power_w", o.transmit_power_w},
        {"capacity_bps", o.capacity_bps},
        {"sinr_db", sinr},
        {"total_sinr_db", finite_or_null(o.total_sinr_db)},
        {"max_sampled_power_w", o.max_sampled_power_w},
        {"max_sampled_power_dbm", finite_or_null(dbm_or_floor(o.max_sampled_power_w))},
        {"iterations", o.allocation.iterations},
        {"converged", o.allocation.converged},
        {"failed", o.failed},
        {"failure", o.failure},
        {"exceedance_cells", cells},
    });
  }
  json layers = json::array();
  for (const auto& l : result.state.layers) layers.push_back({{"ue", l.user}, {"index", l.index}});
  return {
      {"seed", scenario.seed},
      {"users", scenario.ues.size()},
      {"layers", result.state.layers.size()},
      {"antennas", scenario.bs.element_count()},
      {"noise_power_w", scenario.radio.noise_power_w},
      {"emf_threshold_w", scenario.radio.emf_threshold_w},
      {"max_transmit_power_w", scenario.radio.max_transmit_power_w},
      {"condition_number", result.state.condition_number},
      {"lambda", vector_json(result.state.lambda)},
      {"g", vector_json(result.state.g)},
      {"layer_map", layers},
      {"schemes", schemes},
  };
}

std::string montecarlo_csv(const MonteCarloReport& report) {
  std::ostringstream os;
  os << "L,scheme,mean_power_W,mean_capacity_bps,mean_loss_pct,n,excluded\n";
  for (const auto& a : report.aggregates) {
    os << a.users << ',' << scheme_name(a.scheme) << ',' << format_number(a.mean_power_w) << ','
       << format_number(a.mean_capacity_bps) << ',' << format_number(a.mean_loss_pct) << ',' << a.n
       << ',' << a.excluded << '\n';
  }
  return os.str();
}

std::string montecarlo_samples_csv(const MonteCarloReport& report) {
  std::ostringstream os;
  os << "L,sample,seed,scheme,excluded,power_W,capacity_bps,loss_pct,max_sampled_power_W,"
        "iterations,converged\n";
  for (const auto& s : report.samples) {
    for (std::size_t k = 0; k < std::size(kAllSchemes); ++k) {
      os << s.users << ',' << s.index << ',' << s.seed << ',' << scheme_name(kAllSchemes[k]) << ','
         << (s.excluded ? 1 : 0) << ',';
      if (k < s.metrics.size()) {
        const SchemeMetrics& m = s.metrics[k];
        os << format_number(m.transmit_power_w) << ',' << format_number(m.capacity_bps) << ','
           << format_number(m.loss_pct) << ',' << format_number(m.max_sampled_power_w) << ','
           << m.iterations << ',' << (m.converged ? 1 : 0);
      } else {
        os << "nan,nan,nan,nan,0,0";
      }
      os << '\n';
    }
  }
  return os.str();
}

json montecarlo_report_json(const MonteCarloReport& report) {
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({
        {"L", a.users},
        {"scheme", scheme_name(a.scheme)},
        {"mean_power_w", finite_or_null(a.mean_power_w)},
        {"std_power_w", finite_or_null(a.std_power_w)},
        {"mean_capacity_bps", finite_or_null(a.mean_capacity_bps)},
        {"std_capacity_bps", finite_or_null(a.std_capacity_bps)},
        {"mean_loss_pct", finite_or_null(a.mean_loss_pct)},
        {"std_loss_pct", finite_or_null(a.std_loss_pct)},
        {"n", a.n},
        {"excluded", a.excluded},
    });
  }
  json samples = json::array();
  for (const auto& s : report.samples) {
    json metrics = json::array();
    for (std::size_t k = 0; k < s.metrics.size(); ++k) {
      const SchemeMetrics& m = s.metrics[k];
      metrics.push_back({{"scheme", scheme_name(kAllSchemes[k])},
                         {"power_w", m.transmit_power_w},
                         {"capacity_bps", m.capacity_bps},
                         {"loss_pct", finite_or_null(m.loss_pct)},
                         {"max_sampled_power_w", m.max_sampled_power_w},
                         {"iterations", m.iterations},
                         {"converged", m.converged}});
    }
    samples.push_back({{"L", s.users},
                       {"sample", s.index},
                       {"seed", s.seed},
                       {"excluded", s.excluded},
                       {"reason", s.reason},
                       {"metrics", metrics}});
  }
  return {{"users", report.users},
          {"samples_per_l", report.samples_per_l},
          {"base_seed", report.base_seed},
          {"aggregates", aggregates},
          {"samples", samples}};
}

std::string pattern_csv(PatternCut cut, double step_deg, const PatternConstants& pc) {
  if (!(step_deg > 0.0)) throw DomainError("pattern step must be positive");
  const double lo = cut == PatternCut::kAzimuth ? -180.0 : 0.0;
  const double hi = 180.0;
  const long n = std::lround((hi - lo) / step_deg);
  std::ostringstream os;
  os << "angle_deg,gain_dB\n";
  for (long i = 0; i <= n; ++i) {
    const double a = std::min(lo + static_cast<double>(i) * step_deg, hi);
    const double g = cut == PatternCut::kAzimuth ? element_gain_azimuth_db(a, pc)
                                                 : element_gain_elevation_db(a, pc);
    os << format_number(a) << ',' << format_number(g) << '\n';
  }
  return os.str();
}

}  // namespace emfbf
