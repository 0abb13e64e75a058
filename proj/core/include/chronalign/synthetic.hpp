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

#include "chronalign/graph_model.hpp"

namespace chronalign {

// Random temporal KG paired with a relabeled copy of itself. Entity i of G1
// corresponds to a permuted id in G2; relations are permuted too, time ids
// are shared. With zero noise the two graphs are exactly isomorphic.
struct SyntheticSpec {
  std::size_t entities = 500;
  std::size_t relations = 20;
  std::size_t timestamps = 50;  // observed ids 1..timestamps; 0 stays reserved
  std::size_t quadruples = 3000;
  double seed_fraction = 0.1;
  double interval_fraction = 0.3;  // facts with time_end != time_begin
  double untimed_fraction = 0.05;  // facts stamped with the unobserved id
  // Probability that a G2 copy of a fact is dropped.
  double drop_fraction = 0.0;
  // Probability that a kept G2 fact gets a different random time stamp.
  double time_noise = 0.0;
  std::uint64_t rng_seed = 7;
};

TkgPair make_synthetic_pair(const SyntheticSpec& spec);

}  // namespace chronalign
