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

#include "emfbf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "emfbf/errors.hpp"

namespace emfbf {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidConfig(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw InvalidConfig(field(key), "must be a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw InvalidConfig(field(key), "must be an integer");
      out = v->get<int>();
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
        throw InvalidConfig(field(key), "must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw InvalidConfig(field(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  void integers(const char* key, std::vector<int>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw InvalidConfig(field(key), "must be an array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer()) throw InvalidConfig(field(key), "must be an array of integers");
        out.push_back(e.get<int>());
      }
    }
  }

  std::string text(const char* key, const std::string& fallback) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw InvalidConfig(field(key), "must be a string");
      return v->get<std::string>();
    }
    return fallback;
  }

  template <typename Fn>
  void section(const char* key, Fn&& fn) {
    if (const json* v = find(key)) {
      Section sub(*v, field(key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw InvalidConfig(field(it.key().c_str()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string pattern_mode_name(PatternMode m) {
  return m == PatternMode::kIsotropic ? "isotropic" : "3gpp";
}

PatternMode parse_pattern_mode(const std::string& s, const std::string& field) {
  if (s == "3gpp") return PatternMode::kThreeGpp;
  if (s == "isotropic") return PatternMode::kIsotropic;
  throw InvalidConfig(field, "must be \"3gpp\" or \"isotropic\"");
}

std::string step_rule_name(StepRule r) { return r == StepRule::kFixed ? "fixed" : "normalized"; }

StepRule parse_step_rule(const std::string& s, const std::string& field) {
  if (s == "fixed") return StepRule::kFixed;
  if (s == "normalized") return StepRule::kNormalized;
  throw InvalidConfig(field, "must be \"fixed\" or \"normalized\"");
}

void read_pattern(Section& p, PatternConstants& pc) {
  p.number("phi_3db_deg", pc.phi_3db_deg);
  p.number("theta_3db_deg", pc.theta_3db_deg);
  p.number("max_attenuation_db", pc.max_attenuation_db);
  p.number("side_lobe_vertical_db", pc.side_lobe_vertical_db);
  p.number("element_peak_gain_db", pc.element_peak_gain_db);
}

json pattern_json(const PatternConstants& pc) {
  return {{"phi_3db_deg", pc.phi_3db_deg},
          {"theta_3db_deg", pc.theta_3db_deg},
          {"max_attenuation_db", pc.max_attenuation_db},
          {"side_lobe_vertical_db", pc.side_lobe_vertical_db},
          {"element_peak_gain_db", pc.element_peak_gain_db}};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json cd_json(const cd& c) { return json::array({c.real(), c.imag()}); }
Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }
cd cd_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<Vec3> vecs_from(const json& j) {
  std::vector<Vec3> out;
  for (const auto& e : j) out.push_back(vec_from(e));
  return out;
}

json vecs_json(const std::vector<Vec3>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

}  // namespace

SimulationConfig config_from_json(const json& root) {
  if (root.is_object() && root.contains("config") && root.value("tool", "") == "emfbf") {
    SimulationConfig c = config_from_json(root.at("config"));
    if (root.contains("seed")) c.seed = root.at("seed").get<std::uint64_t>();
    return c;
  }

  SimulationConfig c;
  ScenarioConfig& sc = c.scenario;
  Section top(root, "");
  top.seed("seed", c.seed);
  top.section("radio", [&](Section& s) {
    s.number("carrier_frequency_hz", sc.radio.carrier_frequency_hz);
    s.number("bandwidth_hz", sc.radio.bandwidth_hz);
    if (const json* v = s.find("noise_power_w")) {
      if (v->is_null()) {
        sc.radio.noise_power_w.reset();
      } else if (v->is_number()) {
        sc.radio.noise_power_w = v->get<double>();
      } else {
        throw InvalidConfig(s.field("noise_power_w"), "must be a number or null");
      }
    }
    s.number("noise_figure_db", sc.radio.noise_figure_db);
    s.number("max_transmit_power_w", sc.radio.max_transmit_power_w);
    s.number("emf_threshold_dbm", sc.radio.emf_threshold_dbm);
  });
  top.section("bs", [&](Section& s) {
    s.integer("columns", sc.bs.columns);
    s.integer("rows", sc.bs.rows);
    s.number("x_m", sc.bs.x_m);
    s.number("y_m", sc.bs.y_m);
    s.number("height_m", sc.bs.height_m);
    s.number("pretilt_deg", sc.bs.pretilt_deg);
    s.number("boresight_azimuth_deg", sc.bs.boresight_azimuth_deg);
  });
  top.section("ue", [&](Section& s) {
    s.integer("count", sc.ue.count);
    s.integer("antennas", sc.ue.antennas);
    s.integer("layers", sc.ue.layers);
    s.number("height_m", sc.ue.height_m);
  });
  top.section("scatterers", [&](Section& s) {
    s.integer("count", sc.scatterers.count);
    s.number("height_m", sc.scatterers.height_m);
  });
  top.section("ris", [&](Section& s) {
    s.integer("count", sc.ris.count);
    s.integer("elements", sc.ris.elements);
    s.number("height_m", sc.ris.height_m);
    s.integers("assignment", sc.ris.assignment);
  });
  top.section("placement", [&](Section& s) {
    s.number("cell_radius_m", sc.placement.cell_radius_m);
    s.number("sector_half_width_deg", sc.placement.sector_half_width_deg);
  });
  top.section("safety_circle", [&](Section& s) {
    s.number("radius_m", sc.safety_circle.radius_m);
    s.integer("samples", sc.safety_circle.samples);
    s.number("height_m", sc.safety_circle.height_m);
  });
  top.section("pattern", [&](Section& s) {
    sc.pattern_mode = parse_pattern_mode(s.text("mode", pattern_mode_name(sc.pattern_mode)),
                                         s.field("mode"));
    read_pattern(s, sc.pattern);
  });
  top.section("channel", [&](Section& s) {
    s.boolean("direct_path_bs_phase", sc.direct_path_bs_phase);
    s.boolean("physical_bs_phase", sc.physical_bs_phase);
  });
  top.section("dual_gd", [&](Section& s) {
    s.number("tolerance_w", c.dual_gd.tolerance_w);
    s.integer("max_iterations", c.dual_gd.max_iterations);
    c.dual_gd.step_rule =
        parse_step_rule(s.text("step_rule", step_rule_name(c.dual_gd.step_rule)), s.field("step_rule"));
    s.number("fixed_rate", c.dual_gd.fixed_rate);
    s.number("normalized_rate", c.dual_gd.normalized_rate);
    s.number("init_scale", c.dual_gd.init_scale);
  });
  top.section("heatmap", [&](Section& s) {
    s.number("extent_m", c.heatmap.extent_m);
    s.integer("resolution", c.heatmap.resolution);
    s.number("height_m", c.heatmap.height_m);
  });
  top.section("montecarlo", [&](Section& s) {
    s.integers("users", c.montecarlo.users);
    s.integer("samples", c.montecarlo.samples);
  });
  top.finish();

  validate(sc);
  validate(c.dual_gd);
  if (!(c.heatmap.extent_m > 0)) throw InvalidConfig("heatmap.extent_m", "must be positive");
  if (c.heatmap.resolution < 1) throw InvalidConfig("heatmap.resolution", "must be >= 1");
  if (c.heatmap.height_m < 0) throw InvalidConfig("heatmap.height_m", "must be >= 0");
  if (c.montecarlo.samples < 1) throw InvalidConfig("montecarlo.samples", "must be >= 1");
  if (c.montecarlo.users.empty()) throw InvalidConfig("montecarlo.users", "must not be empty");
  for (int l : c.montecarlo.users) {
    if (l < 1) throw InvalidConfig("montecarlo.users", "every L must be >= 1");
  }
  return c;
}

SimulationConfig parse_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig("<file>", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

SimulationConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("<file>", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json config_to_json(const SimulationConfig& c) {
  const ScenarioConfig& sc = c.scenario;
  json radio = {{"carrier_frequency_hz", sc.radio.carrier_frequency_hz},
                {"bandwidth_hz", sc.radio.bandwidth_hz},
                {"noise_figure_db", sc.radio.noise_figure_db},
                {"max_transmit_power_w", sc.radio.max_transmit_power_w},
                {"emf_threshold_dbm", sc.radio.emf_threshold_dbm}};
  radio["noise_power_w"] = sc.radio.noise_power_w ? json(*sc.radio.noise_power_w) : json(nullptr);
  json pattern = pattern_json(sc.pattern);
  pattern["mode"] = pattern_mode_name(sc.pattern_mode);
  return {
      {"seed", c.seed},
      {"radio", radio},
      {"bs",
       {{"columns", sc.bs.columns},
        {"rows", sc.bs.rows},
        {"x_m", sc.bs.x_m},
        {"y_m", sc.bs.y_m},
        {"height_m", sc.bs.height_m},
        {"pretilt_deg", sc.bs.pretilt_deg},
        {"boresight_azimuth_deg", sc.bs.boresight_azimuth_deg}}},
      {"ue",
       {{"count", sc.ue.count},
        {"antennas", sc.ue.antennas},
        {"layers", sc.ue.layers},
        {"height_m", sc.ue.height_m}}},
      {"scatterers", {{"count", sc.scatterers.count}, {"height_m", sc.scatterers.height_m}}},
      {"ris",
       {{"count", sc.ris.count},
        {"elements", sc.ris.elements},
        {"height_m", sc.ris.height_m},
        {"assignment", sc.ris.assignment}}},
      {"placement",
       {{"cell_radius_m", sc.placement.cell_radius_m},
        {"sector_half_width_deg", sc.placement.sector_half_width_deg}}},
      {"safety_circle",
       {{"radius_m", sc.safety_circle.radius_m},
        {"samples", sc.safety_circle.samples},
        {"height_m", sc.safety_circle.height_m}}},
      {"pattern", pattern},
      {"channel",
       {{"direct_path_bs_phase", sc.direct_path_bs_phase},
        {"physical_bs_phase", sc.physical_bs_phase}}},
      {"dual_gd",
       {{"tolerance_w", c.dual_gd.tolerance_w},
        {"max_iterations", c.dual_gd.max_iterations},
        {"step_rule", step_rule_name(c.dual_gd.step_rule)},
        {"fixed_rate", c.dual_gd.fixed_rate},
        {"normalized_rate", c.dual_gd.normalized_rate},
        {"init_scale", c.dual_gd.init_scale}}},
      {"heatmap",
       {{"extent_m", c.heatmap.extent_m},
        {"resolution", c.heatmap.resolution},
        {"height_m", c.heatmap.height_m}}},
      {"montecarlo", {{"users", c.montecarlo.users}, {"samples", c.montecarlo.samples}}},
  };
}

json scenario_to_json(const Scenario& s) {
  json ues = json::array();
  for (const auto& ue : s.ues) {
    ues.push_back({{"center", vec_json(ue.center)},
                   {"elements", vecs_json(ue.elements)},
                   {"layers", ue.layers},
                   {"direct_gain", cd_json(ue.direct_gain)}});
  }
  json scatterers = json::array();
  for (const auto& sc : s.scatterers) {
    scatterers.push_back({{"position", vec_json(sc.position)}, {"gain", cd_json(sc.gain)}});
  }
  json ris = json::array();
  for (const auto& r : s.ris) {
    json w = json::array();
    for (const auto& x : r.weights) w.push_back(cd_json(x));
    ris.push_back({{"center", vec_json(r.center)},
                   {"elements", vecs_json(r.elements)},
                   {"gain", cd_json(r.gain)},
                   {"reflection_amplitude", r.reflection_amplitude},
                   {"weights", w},
                   {"served_ue", r.served_ue}});
  }
  json pattern = pattern_json(s.pattern);
  pattern["mode"] = pattern_mode_name(s.pattern_mode);
  return {
      {"seed", s.seed},
      {"radio",
       {{"carrier_frequency_hz", s.radio.carrier_frequency_hz},
        {"wavelength_m", s.radio.wavelength_m},
        {"bandwidth_hz", s.radio.bandwidth_hz},
        {"noise_power_w", s.radio.noise_power_w},
        {"max_transmit_power_w", s.radio.max_transmit_power_w},
        {"emf_threshold_w", s.radio.emf_threshold_w}}},
      {"bs",
       {{"columns", s.bs.columns},
        {"rows", s.bs.rows},
        {"polarizations", s.bs.polarizations},
        {"spacing_h_m", s.bs.spacing_h_m},
        {"spacing_v_m", s.bs.spacing_v_m},
        {"center", vec_json(s.bs.center)},
        {"pretilt_deg", s.bs.pretilt_deg},
        {"boresight_azimuth_deg", s.bs.boresight_azimuth_deg},
        {"slants_deg", s.bs.slants_deg}}},
      {"pattern", pattern},
      {"direct_path_bs_phase", s.direct_path_bs_phase},
      {"physical_bs_phase", s.physical_bs_phase},
      {"ues", ues},
      {"scatterers", scatterers},
      {"ris", ris},
      {"safety_circle",
       {{"center", vec_json(s.circle.center)},
        {"radius_m", s.circle.radius_m},
        {"height_m", s.circle.height_m},
        {"points", vecs_json(s.circle.points)}}},
  };
}

Scenario scenario_from_json(const json& j) {
  try {
    Scenario s;
    s.seed = j.at("seed").get<std::uint64_t>();
    const json& r = j.at("radio");
    s.radio.carrier_frequency_hz = r.at("carrier_frequency_hz").get<double>();
    s.radio.wavelength_m = r.at("wavelength_m").get<double>();
    s.radio.bandwidth_hz = r.at("bandwidth_hz").get<double>();
    s.radio.noise_power_w = r.at("noise_power_w").get<double>();
    s.radio.max_transmit_power_w = r.at("max_transmit_power_w").get<double>();
    s.radio.emf_threshold_w = r.at("emf_threshold_w").get<double>();
    const json& b = j.at("bs");
    s.bs.columns = b.at("columns").get<int>();
    s.bs.rows = b.at("rows").get<int>();
    s.bs.polarizations = b.at("polarizations").get<int>();
    s.bs.spacing_h_m = b.at("spacing_h_m").get<double>();
    s.bs.spacing_v_m = b.at("spacing_v_m").get<double>();
    s.bs.center = vec_from(b.at("center"));
    s.bs.pretilt_deg = b.at("pretilt_deg").get<double>();
    s.bs.boresight_azimuth_deg = b.at("boresight_azimuth_deg").get<double>();
    s.bs.slants_deg = b.at("slants_deg").get<std::array<double, 2>>();
    Section p(j.at("pattern"), "pattern");
    s.pattern_mode = parse_pattern_mode(p.text("mode", "3gpp"), "pattern.mode");
    read_pattern(p, s.pattern);
    s.direct_path_bs_phase = j.at("direct_path_bs_phase").get<bool>();
    s.physical_bs_phase = j.at("physical_bs_phase").get<bool>();
    for (const auto& u : j.at("ues")) {
      UserEquipment ue;
      ue.center = vec_from(u.at("center"));
      ue.elements = vecs_from(u.at("elements"));
      ue.layers = u.at("layers").get<int>();
      ue.direct_gain = cd_from(u.at("direct_gain"));
      s.ues.push_back(std::move(ue));
    }
    for (const auto& e : j.at("scatterers")) {
      s.scatterers.push_back({vec_from(e.at("position")), cd_from(e.at("gain"))});
    }
    for (const auto& e : j.at("ris")) {
      Ris ris;
      ris.center = vec_from(e.at("center"));
      ris.elements = vecs_from(e.at("elements"));
      ris.gain = cd_from(e.at("gain"));
      ris.reflection_amplitude = e.at("reflection_amplitude").get<double>();
      for (const auto& w : e.at("weights")) ris.weights.push_back(cd_from(w));
      ris.served_ue = e.at("served_ue").get<int>();
      s.ris.push_back(std::move(ris));
    }
    const json& c = j.at("safety_circle");
    s.circle.center = vec_from(c.at("center"));
    s.circle.radius_m = c.at("radius_m").get<double>();
    s.circle.height_m = c.at("height_m").get<double>();
    s.circle.points = vecs_from(c.at("points"));
    return s;
  } catch (const json::exception& e) {
    throw InvalidConfig("<scenario>", e.what());
  }
}

json channel_to_json(const ChannelSet& channel) {
  json users = json::array();
  for (const auto& h : channel.per_user) {
    json rows = json::array();
    for (Eigen::Index n = 0; n < h.rows(); ++n) {
      json row = json::array();
      for (Eigen::Index m = 0; m < h.cols(); ++m) row.push_back(cd_json(h(n, m)));
      rows.push_back(row);
    }
    users.push_back(rows);
  }
  return {{"per_user", users}};
}

ChannelSet channel_from_json(const json& j) {
  ChannelSet out;
  Eigen::Index total_rows = 0;
  Eigen::Index cols = 0;
  for (const auto& rows : j.at("per_user")) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    cols = n ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
    Eigen::MatrixXcd h(n, cols);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index m = 0; m < cols; ++m) h(r, m) = cd_from(rows.at(r).at(m));
    }
    total_rows += n;
    out.per_user.push_back(std::move(h));
  }
  out.stacked.resize(total_rows, cols);
  Eigen::Index at = 0;
  for (const auto& h : out.per_user) {
    out.stacked.middleRows(at, h.rows()) = h;
    at += h.rows();
  }
  return out;
}

}  // namespace emfbf
