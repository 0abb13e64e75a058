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

#include "chronalign/evaluation.hpp"

#include <cstdio>
#include <limits>
#include <unordered_map>

#include "chronalign/error.hpp"

namespace chronalign {

double MetricsReport::hits_at(std::size_t k) const {
  auto it = hits.find(k);
  if (it == hits.end()) throw ContractViolation("hits@" + std::to_string(k) + " was not computed");
  return it->second;
}

MetricsReport evaluate(const AlignmentResult& result, std::span<const EntityPair> refs,
                       std::span<const std::size_t> hits_at) {
  if (refs.empty()) throw ContractViolation("evaluate: empty reference set");
  std::unordered_map<EntityId, const RankedList*> by_source;
  by_source.reserve(result.ranked.size());
  for (const auto& list : result.ranked) by_source.emplace(list.source, &list);

  constexpr std::size_t kMissing = std::numeric_limits<std::size_t>::max();
  double reciprocal_sum = 0.0;
  std::vector<std::size_t> within(hits_at.size(), 0);
  for (const auto& ref : refs) {
    std::size_t rank = kMissing;
    if (auto it = by_source.find(ref.source); it != by_source.end()) {
      const auto& candidates = it->second->candidates;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].target == ref.target) {
          rank = i + 1;
          break;
        }
      }
    }
    if (rank == kMissing) continue;
    reciprocal_sum += 1.0 / static_cast<double>(rank);
    for (std::size_t h = 0; h < hits_at.size(); ++h) {
      if (rank <= hits_at[h]) ++within[h];
    }
  }

  MetricsReport report;
  report.num_evaluated = refs.size();
  const double n = static_cast<double>(refs.size());
  report.mrr = reciprocal_sum / n;
  for (std::size_t h = 0; h < hits_at.size(); ++h) {
    report.hits[hits_at[h]] = static_cast<double>(within[h]) / n;
  }
  return report;
}

MetricsReport average(const MetricsReport& a, const MetricsReport& b) {
  MetricsReport out = a;
  out.mrr = 0.5 * (a.mrr + b.mrr);
  for (auto& [k, v] : out.hits) v = 0.5 * (v + b.hits_at(k));
  return out;
}

std::string to_key_value(const MetricsReport& report) {
  std::string out;
  char buffer[128];
  auto line = [&](const char* key, const char* fmt, auto value) {
    std::snprintf(buffer, sizeof(buffer), fmt, value);
    out += key;
    out += " = ";
    out += buffer;
    out += '\n';
  };
  line("mrr", "%.6f", report.mrr);
  for (const auto& [k, v] : report.hits) {
    const std::string key = "hits@" + std::to_string(k);
    line(key.c_str(), "%.6f", v);
  }
  line("num_evaluated", "%zu", report.num_evaluated);
  line("wall_clock_seconds", "%.3f", report.wall_clock_seconds);
  return out;
}

}  // namespace chronalign
