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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "emfbf/cli.hpp"
#include "emfbf/errors.hpp"
#include "test_util.hpp"

using namespace emfbf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("user list syntax") {
    CHECK(parse_user_list("3..9") == std::vector<int>{3, 4, 5, 6, 7, 8, 9});
    CHECK(parse_user_list("3,5,7") == std::vector<int>{3, 5, 7});
    CHECK(parse_user_list("4") == std::vector<int>{4});
    CHECK_THROWS_AS(parse_user_list("9..3"), InvalidConfig);
    CHECK_THROWS_AS(parse_user_list("a"), InvalidConfig);
    CHECK_THROWS_AS(parse_user_list(""), InvalidConfig);
    CHECK_THROWS_AS(parse_user_list("0,2"), InvalidConfig);
  }

  TEST_CASE("snapshot writes the full output set") {
    const fs::path dir = test::scratch_dir("cli_snapshot");
    const fs::path cfg = write_text(dir, "cfg.json", R"({"heatmap": {"resolution": 12}})");
    std::ostringstream log;
    SnapshotOptions o;
    o.config = cfg;
    o.seed = 5;
    o.out_dir = dir / "out";
    REQUIRE(cmd_snapshot(o, log) == kExitOk);
    for (const char* f : {"scenario.json", "report.json", "heatmap.csv", "exceedance.csv", "manifest.json"}) {
      CHECK(fs::exists(o.out_dir / f));
    }
    const json manifest = json::parse(read_text(o.out_dir / "manifest.json"));
    CHECK(manifest.at("seed") == 5);
    CHECK(manifest.at("status") == "ok");
    CHECK(count_lines(read_text(o.out_dir / "heatmap.csv")) == 1 + 4 * 144);
    const json report = json::parse(read_text(o.out_dir / "report.json"));
    CHECK(report.at("schemes").size() == 4);
  }

  TEST_CASE("manifest reproduces the run") {
    const fs::path dir = test::scratch_dir("cli_replay");
    const fs::path cfg = write_text(dir, "cfg.json", R"({"heatmap": {"resolution": 6}, "ue": {"count": 3}})");
    std::ostringstream log;
    SnapshotOptions a;
    a.config = cfg;
    a.seed = 21;
    a.out_dir = dir / "a";
    REQUIRE(cmd_snapshot(a, log) == kExitOk);
    SnapshotOptions b;
    b.config = a.out_dir / "manifest.json";
    b.out_dir = dir / "b";
    REQUIRE(cmd_snapshot(b, log) == kExitOk);
    for (const char* f : {"scenario.json", "report.json", "heatmap.csv", "exceedance.csv"}) {
      CHECK(read_text(a.out_dir / f) == read_text(b.out_dir / f));
    }
  }

  TEST_CASE("invalid config exits 2 and writes nothing") {
    const fs::path dir = test::scratch_dir("cli_invalid");
    const fs::path cfg = write_text(dir, "cfg.json", R"({"ue": {"count": 4,}})");
    std::ostringstream log;
    SnapshotOptions o;
    o.config = cfg;
    o.out_dir = dir / "out";
    CHECK(cmd_snapshot(o, log) == kExitInvalid);
    CHECK_FALSE(fs::exists(o.out_dir / "manifest.json"));
    CHECK_FALSE(fs::exists(o.out_dir / "report.json"));
    const fs::path bad = write_text(dir, "bad.json", R"({"ue": {"count": 0}})");
    o.config = bad;
    CHECK(cmd_snapshot(o, log) == kExitInvalid);
    CHECK(log.str().find("ue.count") != std::string::npos);
  }

  TEST_CASE("iteration cap exits 3 with a partial manifest") {
    const fs::path dir = test::scratch_dir("cli_cap");
    const fs::path cfg =
        write_text(dir, "cfg.json", R"({"heatmap": {"resolution": 4}, "dual_gd": {"max_iterations": 1}})");
    std::ostringstream log;
    SnapshotOptions o;
    o.config = cfg;
    o.out_dir = dir / "out";
    CHECK(cmd_snapshot(o, log) == kExitConvergence);
    const json manifest = json::parse(read_text(o.out_dir / "manifest.json"));
    CHECK(manifest.at("partial") == true);
    CHECK(manifest.at("failed_schemes").size() == 1);
    CHECK(fs::exists(o.out_dir / "report.json"));
  }

  TEST_CASE("montecarlo writes one row per scheme and sample") {
    const fs::path dir = test::scratch_dir("cli_mc");
    std::ostringstream log;
    MonteCarloOptions o;
    o.users = "4";
    o.samples = 2;
    o.seed = 3;
    o.out_dir = dir / "out";
    REQUIRE(cmd_montecarlo(o, log) == kExitOk);
    CHECK(count_lines(read_text(o.out_dir / "samples.csv")) == 1 + 8);
    CHECK(count_lines(read_text(o.out_dir / "montecarlo.csv")) == 1 + 4);
    const json manifest = json::parse(read_text(o.out_dir / "manifest.json"));
    CHECK(manifest.at("config").at("montecarlo").at("samples") == 2);
    CHECK(fs::exists(o.out_dir / "montecarlo.json"));
  }

  TEST_CASE("pattern cut") {
    const fs::path dir = test::scratch_dir("cli_pattern");
    std::ostringstream log;
    PatternOptions o;
    o.cut = "az";
    o.step_deg = 5.0;
    o.out = dir / "az.csv";
    REQUIRE(cmd_pattern(o, log) == kExitOk);
    const std::string csv = read_text(o.out);
    CHECK(csv.rfind("angle_deg,gain_dB\n", 0) == 0);
    CHECK(count_lines(csv) == 1 + 73);
    CHECK(csv.find("\n0,0\n") != std::string::npos);
    CHECK(csv.find("\n65,-12\n") != std::string::npos);
    CHECK(csv.find("\n180,-30\n") != std::string::npos);
    o.cut = "up";
    CHECK(cmd_pattern(o, log) == kExitInvalid);
  }
}
