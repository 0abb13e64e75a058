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

#include <cstdio>
#include <fstream>
#include <unistd.h>

#include "chronalign/error.hpp"
#include "cli.hpp"

namespace chronalign::cli {

using nlohmann::json;

json config_to_json(const Config& c) {
  return {
      {"dim", c.dim},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"rounds", c.rounds},
      {"topk", c.topk},
      {"sinkhorn_iters", c.sinkhorn_iters},
      {"temperature", c.temperature},
      {"threshold", c.threshold},
      {"max_semi_iters", c.max_semi_iters},
      {"mode", to_string(c.mode)},
      {"disable_tlp", c.disable_tlp},
      {"disable_tc", c.disable_tc},
      {"disable_so", c.disable_so},
      {"rng_seed", c.rng_seed},
      {"direction", to_string(c.direction)},
      {"accept_on", to_string(c.accept_on)},
      {"one_to_one", c.one_to_one},
      {"binarize_adjacency", c.binarize_adjacency},
      {"point_event_double_insert", c.point_event_double_insert},
      {"normalize_retrieval", c.normalize_retrieval},
      {"threads", c.threads},
  };
}

namespace {

template <typename T>
void read(const json& doc, const char* key, T& field) {
  if (!doc.contains(key)) return;
  try {
    field = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename Enum>
void read_enum(const json& doc, const char* key, Enum& field, std::initializer_list<Enum> choices) {
  if (!doc.contains(key)) return;
  std::string text;
  read(doc, key, text);
  for (Enum e : choices) {
    if (text == to_string(e)) {
      field = e;
      return;
    }
  }
  throw ValidationError(std::string("config key '") + key + "': unknown value '" + text + "'");
}

}  // namespace

Config config_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  const json known = config_to_json(Config{});
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  Config c;
  read(doc, "dim", c.dim);
  read(doc, "alpha", c.alpha);
  read(doc, "beta", c.beta);
  read(doc, "rounds", c.rounds);
  read(doc, "topk", c.topk);
  read(doc, "sinkhorn_iters", c.sinkhorn_iters);
  read(doc, "temperature", c.temperature);
  read(doc, "threshold", c.threshold);
  read(doc, "max_semi_iters", c.max_semi_iters);
  read_enum(doc, "mode", c.mode, {Mode::kSupervised, Mode::kSemiSupervised});
  read(doc, "disable_tlp", c.disable_tlp);
  read(doc, "disable_tc", c.disable_tc);
  read(doc, "disable_so", c.disable_so);
  read(doc, "rng_seed", c.rng_seed);
  read_enum(doc, "direction", c.direction, {Direction::kOneWay, Direction::kBoth});
  read_enum(doc, "accept_on", c.accept_on, {AcceptanceScores::kPostSinkhorn, AcceptanceScores::kPreSinkhorn});
  read(doc, "one_to_one", c.one_to_one);
  read(doc, "binarize_adjacency", c.binarize_adjacency);
  read(doc, "point_event_double_insert", c.point_event_double_insert);
  read(doc, "normalize_retrieval", c.normalize_retrieval);
  read(doc, "threads", c.threads);
  return c;
}

json metrics_to_json(const MetricsReport& m) {
  json hits = json::object();
  for (const auto& [k, v] : m.hits) hits[std::to_string(k)] = v;
  return {{"mrr", m.mrr},
          {"hits", hits},
          {"num_evaluated", m.num_evaluated},
          {"wall_clock_seconds", m.wall_clock_seconds}};
}

json report_to_json(const RunSpec& spec, double load_seconds, const std::vector<RunRecord>& runs) {
  json doc = {{"format", "chronalign-report"},
              {"version", 1},
              {"dataset", spec.data.string()},
              {"load_seconds", load_seconds},
              {"sweep", nullptr},
              {"runs", json::array()}};
  if (spec.sweep) doc["sweep"] = {{"parameter", spec.sweep->parameter}, {"values", spec.sweep->values}};
  for (const auto& r : runs) {
    const PipelineOutput& o = r.output;
    json iterations = json::array();
    for (const auto& log : o.state.history) {
      iterations.push_back({{"iteration", log.iteration},
                            {"new_pairs", log.new_pairs},
                            {"cumulative_seeds", log.cumulative_seeds},
                            {"hits@1", log.hits_at_1},
                            {"mrr", log.mrr},
                            {"elapsed_seconds", log.elapsed_seconds}});
    }
    json entry = {{"config", config_to_json(o.metrics.config)},
                  {"metrics", metrics_to_json(o.metrics)},
                  {"timings", o.timings},
                  {"iterations", iterations},
                  {"accepted_pairs", o.state.accepted.size()}};
    if (r.parameter) {
      entry["parameter"] = *r.parameter;
      entry["value"] = r.value;
    }
    doc["runs"].push_back(std::move(entry));
  }
  return doc;
}

void write_json_atomic(const std::filesystem::path& path, const json& doc) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw IngestionError("cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out.flush()) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IngestionError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IngestionError("cannot move report into place at " + path.string());
  }
}

std::string sweep_table(const std::string& parameter, const std::vector<RunRecord>& runs) {
  std::string out = parameter + "\tmrr\thits@1\thits@5\thits@10\tseconds\n";
  char line[192];
  for (const auto& r : runs) {
    const MetricsReport& m = r.output.metrics;
    std::snprintf(line, sizeof(line), "%g\t%.4f\t%.4f\t%.4f\t%.4f\t%.2f\n", r.value, m.mrr, m.hits_at(1),
                  m.hits_at(5), m.hits_at(10), m.wall_clock_seconds);
    out += line;
  }
  return out;
}

}  // namespace chronalign::cli
