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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace chronalign {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using TimeId = std::uint32_t;

// Time id 0 marks a fact without an observed timestamp.
inline constexpr TimeId kUnobservedTime = 0;

struct Quadruple {
  EntityId head = 0;
  RelationId rel = 0;
  EntityId tail = 0;
  TimeId time_begin = 0;
  TimeId time_end = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
};

struct Tkg {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::vector<Quadruple> quadruples;

  friend bool operator==(const Tkg&, const Tkg&) = default;
};

// (entity of G1, entity of G2).
struct EntityPair {
  EntityId source = 0;
  EntityId target = 0;

  friend bool operator==(const EntityPair&, const EntityPair&) = default;
  friend auto operator<=>(const EntityPair&, const EntityPair&) = default;
};

// Two temporal KGs over one merged time vocabulary, plus the supervision
// split. Immutable once loaded; safe to share across threads.
struct TkgPair {
  Tkg g1;
  Tkg g2;
  std::size_t num_times = 0;
  std::vector<EntityPair> seeds;
  std::vector<EntityPair> refs;
  // Optional validation pairs; empty when the dataset ships none.
  std::vector<EntityPair> valid;

  friend bool operator==(const TkgPair&, const TkgPair&) = default;
};

enum class QuadColumn : std::uint8_t { kHead, kRel, kTail, kTimeBegin, kTimeEnd };

// How ids in the files relate to the two graphs.
//  kGlobal: one id space across both graphs (the TEA-GNN release), G2 ids
//           follow G1 ids. Dense per-graph ids are recovered from the
//           ent_ids_*/rel_ids_* files when present, else by offset.
//  kLocal:  each graph numbers its own entities and relations from 0.
enum class IdSpace : std::uint8_t { kGlobal, kLocal };

struct FormatOptions {
  std::string quads_1 = "triples_1";
  std::string quads_2 = "triples_2";
  std::string seed_pairs = "sup_pairs";
  std::string ref_pairs = "ref_pairs";
  // Loaded when present. Folded into refs unless keep_validation_separate.
  std::string valid_pairs = "valid_pairs";
  bool keep_validation_separate = false;
  std::string entity_ids_1 = "ent_ids_1";
  std::string entity_ids_2 = "ent_ids_2";
  std::string relation_ids_1 = "rel_ids_1";
  std::string relation_ids_2 = "rel_ids_2";
  std::string time_ids = "time_id";
  IdSpace id_space = IdSpace::kGlobal;
  // Column position of each field. A four-column line (no time_end column)
  // is accepted and read as a point event.
  std::array<QuadColumn, 5> columns = {QuadColumn::kHead, QuadColumn::kRel, QuadColumn::kTail,
                                       QuadColumn::kTimeBegin, QuadColumn::kTimeEnd};
};

// Parses "h,r,t,tb,te" style column orders. Throws ContractViolation.
std::array<QuadColumn, 5> parse_column_order(const std::string& spec);

TkgPair load_tkg_pair(const std::filesystem::path& dataset_dir,
                      const FormatOptions& options = {});

// Writes the pair in the local-id layout (ent/rel/time id files included) so
// load_tkg_pair(dir, {.id_space = kLocal}) reproduces it exactly.
void write_tkg_pair(const TkgPair& pair, const std::filesystem::path& dataset_dir);

// Bounds checks on every quadruple and pair. Throws ValidationError.
void validate_ids(const TkgPair& pair);

// Checks that seeds and refs are disjoint and each list is one-to-one on
// both sides. Returns the pair unchanged; throws ValidationError listing the
// offending pairs.
const TkgPair& train_test_split_check(const TkgPair& pair);

enum class Mode : std::uint8_t { kSupervised, kSemiSupervised };
enum class Direction : std::uint8_t { kOneWay, kBoth };
// Which table the pseudo-seed threshold is applied to.
enum class AcceptanceScores : std::uint8_t { kPostSinkhorn, kPreSinkhorn };

struct Config {
  std::size_t dim = 512;
  double alpha = 0.6;
  double beta = 0.4;
  std::size_t rounds = 2;
  std::size_t topk = 500;
  std::size_t sinkhorn_iters = 15;
  double temperature = 0.05;
  double threshold = 0.8;
  std::size_t max_semi_iters = 5;
  Mode mode = Mode::kSemiSupervised;
  bool disable_tlp = false;
  bool disable_tc = false;
  bool disable_so = false;
  std::uint64_t rng_seed = 0;
  Direction direction = Direction::kOneWay;
  AcceptanceScores accept_on = AcceptanceScores::kPostSinkhorn;
  // Greedy one-to-one de-conflicting of extracted pairs.
  bool one_to_one = true;
  // Binarize adjacency weights instead of counting repeated facts.
  bool binarize_adjacency = false;
  // Point events put their time id into the time bag twice.
  bool point_event_double_insert = true;
  // L2-normalize fused labels before inner-product retrieval (cosine).
  bool normalize_retrieval = true;
  std::size_t threads = 0;

  // Throws ContractViolation naming the first violated bound.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

const char* to_string(Mode mode);
const char* to_string(Direction direction);
const char* to_string(AcceptanceScores scores);

}  // namespace chronalign
