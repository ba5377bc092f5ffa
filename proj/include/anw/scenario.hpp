// Copyright 2026 The anw Authors
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

// Scenario runners behind the command-line tool. A scenario is a JSON document
// (see README.md for the schema); phases and LO angles are given in units of
// pi and nodes and modes are numbered from 1.

#include "anw/optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anw {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides optimizer.seed
  int threads = 1;
  bool deterministic = false;  // forces serial evaluation
};

struct RunOutput {
  nlohmann::json record;  // ResultRecord
  std::string csv;        // tabular view of the same results
  /// 1 certified, 0 failed certification, -1 not applicable.
  int certified = -1;
};

const std::vector<std::string>& scenario_commands();

/// Parses and validates a scenario. A ResultRecord is accepted too, in which
/// case its echoed config is used. Throws Error{config} on schema violations.
nlohmann::json load_scenario(std::string_view text);

/// Runs one of scenario_commands() on a parsed scenario.
RunOutput run_scenario(const std::string& command, const nlohmann::json& scenario,
                       const RunOptions& options);

// Parsed blocks, exposed for tests.
ArrayConfig parse_array(const nlohmann::json& scenario);
PumpProfile parse_pump(const nlohmann::json& scenario, Index n);
GraphSpec parse_graph(const nlohmann::json& scenario, Index n);
EsConfig parse_optimizer(const nlohmann::json& scenario, const RunOptions& options);

}  // namespace anw
