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
#include <span>
#include <vector>

#include "chronalign/graph_model.hpp"
#include "chronalign/sparse.hpp"

namespace chronalign {

// Five L1-row-normalized views over the union index spaces: G1 entities
// precede G2 entities, relations are G1 then G2 then the inverse copies of
// both, and the time vocabulary is shared.
struct AdjacencyViews {
  SparseMatrix a_ee;  // |E| x |E|, symmetric pattern
  SparseMatrix a_er;  // |E| x 2|R|
  SparseMatrix a_re;  // 2|R| x |E|
  SparseMatrix a_et;  // |E| x |T*|
  SparseMatrix a_te;  // |T*| x |E|

  std::size_t g1_entities = 0;
  std::size_t g2_entities = 0;
  std::size_t g1_relations = 0;
  std::size_t g2_relations = 0;
  std::size_t num_times = 0;

  std::size_t num_entities() const { return g1_entities + g2_entities; }
  std::size_t num_relations() const { return g1_relations + g2_relations; }
  // Row of a G2 entity in the union entity space.
  std::size_t g2_offset() const { return g1_entities; }
};

struct ViewOptions {
  // 1 per distinct (row, col) instead of the fact count.
  bool binarize = false;
};

AdjacencyViews build_adjacency_views(const TkgPair& pair, const ViewOptions& options = {});

// Union-space rows of the two entities in each pair share one random unit
// vector; every other row is zero. Deterministic in rng_seed.
DenseMatrix init_entity_labels(std::size_t g1_entities, std::size_t g2_entities,
                               std::span<const EntityPair> seeds, std::size_t dim,
                               std::uint64_t rng_seed);
DenseMatrix init_entity_labels(const TkgPair& pair, std::size_t dim, std::uint64_t rng_seed);

enum class Aspect : std::uint8_t { kRelational, kTemporal };

struct LabelState {
  DenseMatrix l_e;
  // Relation labels (relational aspect) or timestamp labels (temporal).
  DenseMatrix l_aux;
  // Entity labels after each round, history[0] being the initial labels.
  std::vector<DenseMatrix> history;

  std::size_t round() const { return history.empty() ? 0 : history.size() - 1; }
};

struct PropagationOptions {
  // Per-round L2 normalization. Only tests turn this off.
  bool normalize = true;
};

// Round-0 state: entity labels from `init`, auxiliary labels zero.
LabelState initial_state(const AdjacencyViews& views, const DenseMatrix& init, Aspect aspect);

// One simultaneous round: L_e' = A_ee L_e + A_er L_r, L_r' = A_re L_e.
LabelState propagate_relational(const AdjacencyViews& views, const LabelState& state,
                                const PropagationOptions& options = {});
// Same schedule with the entity/time views.
LabelState propagate_temporal(const AdjacencyViews& views, const LabelState& state,
                              const PropagationOptions& options = {});

// |E| x dim*(rounds+1): every round's entity labels concatenated per row.
DenseMatrix run_aspect(const AdjacencyViews& views, const DenseMatrix& init, std::size_t rounds,
                       Aspect aspect, const PropagationOptions& options = {});

// (1 - alpha) * rel + alpha * temp.
DenseMatrix fuse_labels(const DenseMatrix& rel, const DenseMatrix& temp, double alpha);

}  // namespace chronalign
