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

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chronalign/graph_model.hpp"
#include "chronalign/matching.hpp"

namespace chronalign {

struct MetricsReport {
  double mrr = 0.0;
  std::map<std::size_t, double> hits;  // k -> proportion with rank <= k
  std::size_t num_evaluated = 0;
  double wall_clock_seconds = 0.0;
  Config config;

  double hits_at(std::size_t k) const;
};

inline constexpr std::size_t kDefaultHitsAt[] = {1, 5, 10};

// Rank of the true target is its 1-based position in the source's ranked
// list; a source without a list or a target outside it counts as rank
// infinity (reciprocal 0). Throws ContractViolation on an empty reference set.
MetricsReport evaluate(const AlignmentResult& result, std::span<const EntityPair> refs,
                       std::span<const std::size_t> hits_at = kDefaultHitsAt);

// Element-wise mean of equally sized reports (used for two-way evaluation).
MetricsReport average(const MetricsReport& a, const MetricsReport& b);

// "key = value" lines.
std::string to_key_value(const MetricsReport& report);

}  // namespace chronalign
