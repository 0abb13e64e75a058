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

#include "chronalign/temporal.hpp"

#include <algorithm>
#include <map>

namespace chronalign {

void TimeBag::add(TimeId time, std::uint32_t count) {
  if (time == kUnobservedTime || count == 0) return;
  auto it = std::lower_bound(counts.begin(), counts.end(), time,
                             [](const auto& entry, TimeId t) { return entry.first < t; });
  if (it != counts.end() && it->first == time) {
    it->second += count;
  } else {
    counts.insert(it, {time, count});
  }
  total += count;
}

std::uint32_t TimeBag::count(TimeId time) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), time,
                             [](const auto& entry, TimeId t) { return entry.first < t; });
  return it != counts.end() && it->first == time ? it->second : 0;
}

TimeBagTable collect_time_bags(const TkgPair& pair, const TimeBagOptions& options) {
  auto collect = [&](const Tkg& g) {
    // Ordered maps while counting; flattened into sorted vectors afterwards.
    std::vector<std::map<TimeId, std::uint32_t>> tallies(g.num_entities);
    auto insert = [&](EntityId e, TimeId tau) {
      if (tau != kUnobservedTime) ++tallies[e][tau];
    };
    for (const auto& q : g.quadruples) {
      const bool point = q.time_begin == q.time_end;
      for (EntityId e : {q.head, q.tail}) {
        insert(e, q.time_begin);
        if (!point || options.double_insert_point_events) insert(e, q.time_end);
      }
    }
    std::vector<TimeBag> bags(g.num_entities);
    for (std::size_t e = 0; e < g.num_entities; ++e) {
      bags[e].entity = static_cast<EntityId>(e);
      bags[e].counts.assign(tallies[e].begin(), tallies[e].end());
      for (const auto& [t, c] : bags[e].counts) bags[e].total += c;
    }
    return bags;
  };
  return {collect(pair.g1), collect(pair.g2)};
}

double time_similarity(const TimeBag& a, const TimeBag& b) {
  const std::uint64_t denom = a.total + b.total;
  if (denom == 0) return 0.0;
  std::uint64_t shared = 0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      shared += std::min(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(denom);
}

}  // namespace chronalign
