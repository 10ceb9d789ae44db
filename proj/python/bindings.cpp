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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "emfbf/antenna.hpp"
#include "emfbf/allocators.hpp"
#include "emfbf/channel.hpp"
#include "emfbf/config.hpp"
#include "emfbf/errors.hpp"
#include "emfbf/evaluation.hpp"
#include "emfbf/report_io.hpp"
#include "emfbf/scenario.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

emfbf::SimulationConfig parse(const std::string& config_json) {
  return emfbf::parse_config_text(config_json.empty() ? "{}" : config_json);
}

py::dict outcome_dict(const emfbf::SchemeOutcome& o) {
  py::dict d;
  d["scheme"] = std::string(emfbf::scheme_name(o.scheme));
  d["power_w"] = o.allocation.power;
  d["transmit_power_w"] = o.transmit_power_w;
  d["capacity_bps"] = o.capacity_bps;
  d["sinr_db"] = o.sinr_db;
  d["total_sinr_db"] = o.total_sinr_db;
  d["max_sampled_power_w"] = o.max_sampled_power_w;
  d["iterations"] = o.allocation.iterations;
  d["converged"] = o.allocation.converged;
  d["failed"] = o.failed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_emfbf, m) {
  m.doc() = "EMF-aware MU-MIMO beamforming simulator";
  m.attr("__version__") = emfbf::kVersion;

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<emfbf::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<emfbf::InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<emfbf::RankDeficient>(m, "RankDeficient", PyExc_ArithmeticError);
  py::register_exception<emfbf::DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("element_gain_azimuth_db", [](double phi) { return emfbf::element_gain_azimuth_db(phi); },
        py::arg("phi_deg"));
  m.def("element_gain_elevation_db",
        [](double theta) { return emfbf::element_gain_elevation_db(theta); }, py::arg("theta_deg"));
  m.def("element_gain_db",
        [](double theta, double phi) { return emfbf::element_gain_db(theta, phi); },
        py::arg("theta_deg"), py::arg("phi_deg"));
  m.def(
      "array_factor_db",
      [](int columns, int rows, double pretilt_deg, double wavelength_m) {
        emfbf::BsArrayGeometry g;
        g.columns = columns;
        g.rows = rows;
        g.pretilt_deg = pretilt_deg;
        g.spacing_h_m = g.spacing_v_m = 0.5 * wavelength_m;
        return emfbf::array_factor_db(g, wavelength_m);
      },
      py::arg("columns"), py::arg("rows"), py::arg("pretilt_deg"), py::arg("wavelength_m"));

  m.def(
      "waterfill",
      [](const std::vector<double>& lambda, const std::vector<double>& g, double max_power_w,
         double noise_power_w) {
        const auto a = emfbf::waterfill(lambda, g, max_power_w, noise_power_w);
        return py::make_tuple(a.power, a.multipliers(0));
      },
      py::arg("lam"), py::arg("g"), py::arg("max_power_w"), py::arg("noise_power_w"),
      "Returns (powers, water-level multiplier).");

  py::class_<emfbf::Scenario>(m, "Scenario")
      .def_static(
          "from_config",
          [](const std::string& config_json, std::optional<std::uint64_t> seed) {
            const auto c = parse(config_json);
            return emfbf::build_scenario(c.scenario, seed.value_or(c.seed));
          },
          py::arg("config_json") = "{}", py::arg("seed") = py::none())
      .def_static("from_json",
                  [](const std::string& text) { return emfbf::scenario_from_json(json::parse(text)); })
      .def("to_json", [](const emfbf::Scenario& s) { return emfbf::scenario_to_json(s).dump(); })
      .def_property_readonly("users", [](const emfbf::Scenario& s) { return s.ues.size(); })
      .def_property_readonly("antennas", [](const emfbf::Scenario& s) { return s.bs.element_count(); })
      .def_property_readonly("layers", &emfbf::Scenario::total_layers)
      .def_property_readonly("noise_power_w", [](const emfbf::Scenario& s) { return s.radio.noise_power_w; })
      .def_property_readonly("emf_threshold_w",
                             [](const emfbf::Scenario& s) { return s.radio.emf_threshold_w; })
      .def("channel", [](const emfbf::Scenario& s) { return emfbf::build_channel(s).stacked; })
      .def(
          "observation",
          [](const emfbf::Scenario& s, const Eigen::MatrixX3d& points) {
            std::vector<emfbf::Vec3> q;
            for (Eigen::Index i = 0; i < points.rows(); ++i) q.emplace_back(points.row(i).transpose());
            return emfbf::ChannelModel(s).observation(q);
          },
          py::arg("points"));

  m.def(
      "evaluate_snapshot",
      [](const emfbf::Scenario& s, const std::string& config_json) {
        const auto c = parse(config_json);
        const auto r = emfbf::evaluate_snapshot(s, c.dual_gd);
        py::dict out;
        out["lambda"] = r.state.lambda;
        out["g"] = r.state.g;
        out["condition_number"] = r.state.condition_number;
        out["exposure"] = r.context.exposure;
        py::list schemes;
        for (const auto& o : r.schemes) schemes.append(outcome_dict(o));
        out["schemes"] = schemes;
        return out;
      },
      py::arg("scenario"), py::arg("config_json") = "{}");

  m.def(
      "monte_carlo",
      [](const std::string& config_json, const std::vector<int>& users, int samples,
         std::optional<std::uint64_t> seed, int workers) {
        const auto c = parse(config_json);
        emfbf::MonteCarloReport r;
        {
          py::gil_scoped_release release;
          r = emfbf::monte_carlo(c.scenario, c.dual_gd, users, samples, seed.value_or(c.seed), workers);
        }
        return emfbf::montecarlo_report_json(r).dump();
      },
      py::arg("config_json") = "{}", py::arg("users") = std::vector<int>{3, 4, 5, 6, 7, 8, 9},
      py::arg("samples") = 200, py::arg("seed") = py::none(), py::arg("workers") = 0,
      "Returns the report as a JSON string.");
}
