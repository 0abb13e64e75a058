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
#include <cstdint>
#include <utility>
#include <vector>

#include "chronalign/graph_model.hpp"

namespace chronalign {

// Multiset of the time ids an entity occurs with. Never holds the
// unobserved id 0.
struct TimeBag {
  EntityId entity = 0;
  // (time id, count >= 1), ascending by time id.
  std::vector<std::pair<TimeId, std::uint32_t>> counts;
  std::uint64_t total = 0;

  void add(TimeId time, std::uint32_t count = 1);
  std::uint32_t count(TimeId time) const;
  bool empty() const { return total == 0; }
};

// Bags of both graphs, indexed by each graph's local entity id.
struct TimeBagTable {
  std::vector<TimeBag> g1;
  std::vector<TimeBag> g2;
};

struct TimeBagOptions {
  // A point event (begin == end) inserts its id twice, once per column.
  bool double_insert_point_events = true;
};

TimeBagTable collect_time_bags(const TkgPair& pair, const TimeBagOptions& options = {});

// Multiset Dice coefficient 2v / (k + q); 0 when both bags are empty.
double time_similarity(const TimeBag& a, const TimeBag& b);

}  // namespace chronalign
