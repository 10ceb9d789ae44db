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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace emfbf {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalid = 2,
  kExitConvergence = 3,
  kExitRuntime = 4,
};

struct SnapshotOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "out";
};

struct MonteCarloOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> users;  // "3..9" or "3,5,7"
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = "out";
  int workers = 0;
};

struct PatternOptions {
  std::string cut = "az";
  double step_deg = 0.5;
  std::filesystem::path out = "pattern.csv";
};

/// Parses "a..b" ranges and comma lists, e.g. "3..5,8" -> {3, 4, 5, 8}.
std::vector<int> parse_user_list(const std::string& text);

int cmd_snapshot(const SnapshotOptions& opts, std::ostream& log);
int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& log);
int cmd_pattern(const PatternOptions& opts, std::ostream& log);

/// Entry point of the `emfbf` executable. EMFBF_WORKERS overrides the
/// Monte Carlo worker count.
int run_cli(int argc, char** argv);

}  // namespace emfbf
