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

#include "emfbf/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emfbf/config.hpp"
#include "emfbf/errors.hpp"
#include "emfbf/evaluation.hpp"
#include "emfbf/report_io.hpp"
#include "emfbf/scenario.hpp"

namespace emfbf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

SimulationConfig resolve_config(const std::optional<fs::path>& path) {
  if (!path) return config_from_json(json::object());
  return load_config_file(*path);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json manifest(const std::string& command, const SimulationConfig& config,
              const std::vector<std::string>& outputs, double duration_s) {
  return {{"tool", "emfbf"},
          {"version", kVersion},
          {"command", command},
          {"seed", config.seed},
          {"config", config_to_json(config)},
          {"outputs", outputs},
          {"duration_s", duration_s}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::vector<int> parse_user_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidConfig("--L-list", "bad entry '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int a = to_int(item.substr(0, dots));
    const int b = to_int(item.substr(dots + 2));
    if (b < a) throw InvalidConfig("--L-list", "empty range '" + item + "'");
    for (int l = a; l <= b; ++l) out.push_back(l);
  }
  if (out.empty()) throw InvalidConfig("--L-list", "no values");
  for (int l : out) {
    if (l < 1) throw InvalidConfig("--L-list", "every L must be >= 1");
  }
  return out;
}

int cmd_snapshot(const SnapshotOptions& opts, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  SimulationConfig config;
  try {
    config = resolve_config(opts.config);
    if (opts.seed) config.seed = *opts.seed;
  } catch (const InvalidConfig& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const Scenario scenario = build_scenario(config.scenario, config.seed);
    const SnapshotResult result = evaluate_snapshot(scenario, config.dual_gd);

    std::vector<std::pair<Scheme, Eigen::MatrixXcd>> beams;
    for (const auto& o : result.schemes) beams.emplace_back(o.scheme, result.beamformer(o.scheme));
    const HeatmapGrid grid = power_heatmap(scenario, beams, config.heatmap);
    const ExceedanceGrid exceed =
        exceedance_map(grid, scenario.radio.emf_threshold_w, scenario.circle);

    ensure_dir(opts.out_dir);
    const std::vector<std::string> outputs = {"scenario.json", "report.json", "heatmap.csv",
                                              "exceedance.csv"};
    write_file_atomic(opts.out_dir / "scenario.json", scenario_to_json(scenario).dump(2) + "\n");
    write_file_atomic(opts.out_dir / "report.json",
                      snapshot_report_json(scenario, result, exceed).dump(2) + "\n");
    write_file_atomic(opts.out_dir / "heatmap.csv", heatmap_csv(grid));
    write_file_atomic(opts.out_dir / "exceedance.csv", exceedance_csv(exceed));

    json failed = json::array();
    for (const auto& o : result.schemes) {
      if (o.failed) failed.push_back(scheme_name(o.scheme));
    }
    json m = manifest("snapshot", config, outputs, seconds_since(start));
    m["status"] = failed.empty() ? "ok" : "convergence_failure";
    m["partial"] = !failed.empty();
    m["failed_schemes"] = failed;
    write_file_atomic(opts.out_dir / "manifest.json", m.dump(2) + "\n");

    for (const auto& o : result.schemes) {
      log << scheme_name(o.scheme) << ": power " << format_number(o.transmit_power_w)
          << " W, capacity " << format_number(o.capacity_bps) << " bit/s, max P_Q "
          << format_number(o.max_sampled_power_w) << " W" << (o.failed ? " [failed]" : "") << '\n';
    }
    if (!failed.empty()) {
      log << "error: dual gradient iteration did not converge; outputs are partial\n";
      return kExitConvergence;
    }
    return kExitOk;
  } catch (const InvalidConfig& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  SimulationConfig config;
  try {
    config = resolve_config(opts.config);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.users) config.montecarlo.users = parse_user_list(*opts.users);
    if (opts.samples) {
      if (*opts.samples < 1) throw InvalidConfig("--samples", "must be >= 1");
      config.montecarlo.samples = *opts.samples;
    }
  } catch (const InvalidConfig& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const MonteCarloReport report =
        monte_carlo(config.scenario, config.dual_gd, config.montecarlo.users,
                    config.montecarlo.samples, config.seed, opts.workers);

    ensure_dir(opts.out_dir);
    const std::vector<std::string> outputs = {"montecarlo.csv", "samples.csv", "montecarlo.json"};
    write_file_atomic(opts.out_dir / "montecarlo.csv", montecarlo_csv(report));
    write_file_atomic(opts.out_dir / "samples.csv", montecarlo_samples_csv(report));
    write_file_atomic(opts.out_dir / "montecarlo.json", montecarlo_report_json(report).dump(2) + "\n");
    json m = manifest("montecarlo", config, outputs, seconds_since(start));
    m["status"] = "ok";
    write_file_atomic(opts.out_dir / "manifest.json", m.dump(2) + "\n");

    for (int l : report.users) {
      const auto& ref = report.aggregate(l, Scheme::kReference);
      log << "L=" << l << " n=" << ref.n << " excluded=" << ref.excluded;
      for (Scheme s : kAllSchemes) {
        const auto& a = report.aggregate(l, s);
        log << ' ' << scheme_name(s) << "=" << format_number(a.mean_power_w) << "W/"
            << format_number(a.mean_loss_pct) << "%";
      }
      log << '\n';
    }
    return kExitOk;
  } catch (const InvalidConfig& e) {
    log << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_pattern(const PatternOptions& opts, std::ostream& log) {
  PatternCut cut;
  if (opts.cut == "az") {
    cut = PatternCut::kAzimuth;
  } else if (opts.cut == "el") {
    cut = PatternCut::kElevation;
  } else {
    log << "error: --cut must be az or el\n";
    return kExitInvalid;
  }
  if (!(opts.step_deg > 0.0)) {
    log << "error: --step must be positive\n";
    return kExitInvalid;
  }
  try {
    if (opts.out.has_parent_path()) ensure_dir(opts.out.parent_path());
    write_file_atomic(opts.out, pattern_csv(cut, opts.step_deg));
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"EMF-aware MU-MIMO beamforming simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SnapshotOptions snap;
  std::string snap_config;
  std::uint64_t snap_seed = 0;
  auto* s = app.add_subcommand("snapshot", "Evaluate one seeded snapshot and write heatmaps");
  auto* s_cfg = s->add_option("--config", snap_config, "JSON config or run manifest")->check(CLI::ExistingFile);
  auto* s_seed = s->add_option("--seed", snap_seed, "Snapshot seed");
  s->add_option("--out-dir", snap.out_dir, "Output directory")->required();

  MonteCarloOptions mc;
  std::string mc_config;
  std::string mc_users;
  int mc_samples = 0;
  std::uint64_t mc_seed = 0;
  auto* m = app.add_subcommand("montecarlo", "Run the Monte Carlo comparison over L");
  auto* m_cfg = m->add_option("--config", mc_config, "JSON config or run manifest")->check(CLI::ExistingFile);
  auto* m_users = m->add_option("--L-list", mc_users, "UE counts, e.g. 3..9 or 3,5,7");
  auto* m_samples = m->add_option("--samples", mc_samples, "Samples per L");
  auto* m_seed = m->add_option("--seed", mc_seed, "Base seed");
  m->add_option("--out-dir", mc.out_dir, "Output directory")->required();

  PatternOptions pat;
  auto* p = app.add_subcommand("pattern", "Dump an element pattern cut");
  p->add_option("--cut", pat.cut, "az or el")->required()->check(CLI::IsMember({"az", "el"}));
  p->add_option("--step", pat.step_deg, "Angle step in degrees");
  p->add_option("--out", pat.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (s->parsed()) {
    if (*s_cfg) snap.config = snap_config;
    if (*s_seed) snap.seed = snap_seed;
    return cmd_snapshot(snap, std::cerr);
  }
  if (m->parsed()) {
    if (*m_cfg) mc.config = mc_config;
    if (*m_users) mc.users = mc_users;
    if (*m_samples) mc.samples = mc_samples;
    if (*m_seed) mc.seed = mc_seed;
    if (const char* env = std::getenv("EMFBF_WORKERS")) {
      try {
        mc.workers = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "error: EMFBF_WORKERS must be an integer\n";
        return kExitInvalid;
      }
    }
    return cmd_montecarlo(mc, std::cerr);
  }
  return cmd_pattern(pat, std::cerr);
}

}  // namespace emfbf
