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

#include "chronalign/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "chronalign/error.hpp"

namespace chronalign {

TkgPair make_synthetic_pair(const SyntheticSpec& spec) {
  if (spec.entities < 2 || spec.relations < 1 || spec.timestamps < 1) {
    throw ContractViolation("synthetic pair needs >= 2 entities, >= 1 relation and timestamp");
  }
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_int_distribution<EntityId> any_entity(0, static_cast<EntityId>(spec.entities - 1));
  std::uniform_int_distribution<RelationId> any_relation(0, static_cast<RelationId>(spec.relations - 1));
  std::uniform_int_distribution<TimeId> any_time(1, static_cast<TimeId>(spec.timestamps));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_times = [&](Quadruple& q) {
    if (unit(rng) < spec.untimed_fraction) {
      q.time_begin = q.time_end = kUnobservedTime;
      return;
    }
    q.time_begin = any_time(rng);
    q.time_end = q.time_begin;
    if (unit(rng) < spec.interval_fraction) {
      q.time_end = std::max(q.time_begin, any_time(rng));
    }
  };
  auto random_fact = [&](EntityId head) {
    Quadruple q;
    q.head = head;
    do {
      q.tail = any_entity(rng);
    } while (q.tail == q.head);
    q.rel = any_relation(rng);
    random_times(q);
    return q;
  };

  TkgPair pair;
  pair.num_times = spec.timestamps + 1;
  pair.g1.num_entities = pair.g2.num_entities = spec.entities;
  pair.g1.num_relations = pair.g2.num_relations = spec.relations;

  // Every entity heads at least one fact so none is isolated.
  const std::size_t total = std::max(spec.quadruples, spec.entities);
  pair.g1.quadruples.reserve(total);
  for (std::size_t e = 0; e < spec.entities; ++e) {
    pair.g1.quadruples.push_back(random_fact(static_cast<EntityId>(e)));
  }
  while (pair.g1.quadruples.size() < total) pair.g1.quadruples.push_back(random_fact(any_entity(rng)));

  std::vector<EntityId> entity_map(spec.entities);
  std::iota(entity_map.begin(), entity_map.end(), EntityId{0});
  std::shuffle(entity_map.begin(), entity_map.end(), rng);
  std::vector<RelationId> relation_map(spec.relations);
  std::iota(relation_map.begin(), relation_map.end(), RelationId{0});
  std::shuffle(relation_map.begin(), relation_map.end(), rng);

  for (const auto& q : pair.g1.quadruples) {
    if (spec.drop_fraction > 0.0 && unit(rng) < spec.drop_fraction) continue;
    Quadruple copy{entity_map[q.head], relation_map[q.rel], entity_map[q.tail], q.time_begin,
                   q.time_end};
    if (spec.time_noise > 0.0 && unit(rng) < spec.time_noise) random_times(copy);
    pair.g2.quadruples.push_back(copy);
  }
  std::shuffle(pair.g2.quadruples.begin(), pair.g2.quadruples.end(), rng);

  std::vector<EntityId> order(spec.entities);
  std::iota(order.begin(), order.end(), EntityId{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_seeds = static_cast<std::size_t>(spec.seed_fraction * static_cast<double>(spec.entities));
  for (std::size_t i = 0; i < order.size(); ++i) {
    const EntityPair p{order[i], entity_map[order[i]]};
    (i < n_seeds ? pair.seeds : pair.refs).push_back(p);
  }
  return pair;
}

}  // namespace chronalign
