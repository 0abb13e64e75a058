// Copyright 2026 The chronalign Authors.
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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chronalign/graph_model.hpp"
#include "chronalign/pipeline.hpp"

namespace chronalign::cli {

// Parameter names accepted by --sweep.
inline constexpr const char* kSweepParameters[] = {"alpha", "beta", "d", "k", "m", "t", "threshold"};

struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

// "0,0.1,...,1.0" style lists. "..." continues the step of the two values
// before it up to the value after it.
std::vector<double> expand_values(const std::string& list);
// "name=v1,v2,...". Throws ValidationError on unknown names or bad values.
Sweep parse_sweep(const std::string& text);
// Sets one sweep parameter; integer parameters reject fractional values.
void apply_parameter(Config& config, const std::string& name, double value);

struct RunSpec {
  std::filesystem::path data;
  Config config;
  FormatOptions format;
  std::optional<std::filesystem::path> out;
  std::optional<Sweep> sweep;
  std::optional<std::filesystem::path> dump_candidates;
  std::optional<std::filesystem::path> dump_raw_candidates;
  bool quiet = false;  // no per-iteration lines on stderr
};

struct RunRecord {
  std::optional<std::string> parameter;
  double value = 0.0;
  PipelineOutput output;
};

nlohmann::json config_to_json(const Config& config);
// Missing keys keep their defaults; unknown keys or bad values throw
// ValidationError.
Config config_from_json(const nlohmann::json& doc);
nlohmann::json metrics_to_json(const MetricsReport& metrics);
nlohmann::json report_to_json(const RunSpec& spec, double load_seconds,
                              const std::vector<RunRecord>& runs);
// Writes next to the destination and renames, so a failed run leaves no
// partial file behind.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& doc);

std::string sweep_table(const std::string& parameter, const std::vector<RunRecord>& runs);

// Executes the loaded dataset for every sweep value (or once).
std::vector<RunRecord> execute(const RunSpec& spec, const TkgPair& pair, std::ostream& log);

// Entry point without the program name. Returns the process exit status:
// 0 success, 1 data or runtime failure, 2 bad usage.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chronalign::cli
