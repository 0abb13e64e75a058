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
#include <filesystem>
#include <span>
#include <vector>

#include "chronalign/graph_model.hpp"
#include "chronalign/sparse.hpp"
#include "chronalign/temporal.hpp"

namespace chronalign {

struct Candidate {
  EntityId target = 0;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Descending score, ties by ascending target id.
inline bool ranks_before(const Candidate& a, const Candidate& b) {
  return a.score > b.score || (a.score == b.score && a.target < b.target);
}

// Rectangular sparse similarity: every source row holds exactly capacity()
// candidates, sorted with ranks_before, no target twice in a row.
class CandidateTable {
 public:
  CandidateTable() = default;
  // Rows must share one length. Rows are sorted; duplicates or non-finite
  // scores throw ContractViolation.
  static CandidateTable from_rows(std::vector<EntityId> source_ids,
                                  std::vector<std::vector<Candidate>> rows);

  std::size_t num_rows() const { return source_ids_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::span<const EntityId> source_ids() const { return source_ids_; }
  EntityId source_id(std::size_t r) const { return source_ids_[r]; }

  std::span<const Candidate> row(std::size_t r) const {
    return {cells_.data() + r * capacity_, capacity_};
  }
  std::span<Candidate> row(std::size_t r) { return {cells_.data() + r * capacity_, capacity_}; }
  std::span<const Candidate> cells() const { return cells_; }
  std::span<Candidate> cells() { return cells_; }

  // Restores the per-row ordering after scores were rewritten in place.
  void sort_rows();

  friend bool operator==(const CandidateTable&, const CandidateTable&) = default;

 private:
  friend CandidateTable topk_candidates(const DenseMatrix&, std::span<const EntityId>,
                                        const DenseMatrix&, std::span<const EntityId>,
                                        std::size_t);
  std::vector<EntityId> source_ids_;
  std::size_t capacity_ = 0;
  std::vector<Candidate> cells_;
};

struct ScoredPair {
  EntityPair pair;
  double score = 0.0;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

struct RankedList {
  EntityId source = 0;
  std::vector<Candidate> candidates;  // ranks_before order
};

struct AlignmentResult {
  std::vector<RankedList> ranked;
  std::vector<ScoredPair> pairs;  // one-to-one on both sides when de-conflicted
};

// Exact inner-product top-k. Row i of each matrix belongs to the i-th id.
// k is clamped to the number of targets.
CandidateTable topk_candidates(const DenseMatrix& source_labels, std::span<const EntityId> source_ids,
                               const DenseMatrix& target_labels, std::span<const EntityId> target_ids,
                               std::size_t k);
// Ids default to row positions.
CandidateTable topk_candidates(const DenseMatrix& source_labels, const DenseMatrix& target_labels,
                               std::size_t k);

// score <- (1 - beta) * score + beta * time_similarity(source, target) on the
// stored cells only. Bags are indexed by the ids stored in the table.
CandidateTable apply_time_constraints(CandidateTable table, std::span<const TimeBag> source_bags,
                                      std::span<const TimeBag> target_bags, double beta);

// exp(score / t) after a per-row max shift, then `iterations` passes of row
// then column L1 normalization over the stored pattern. Runs in double.
enum class SinkhornFinish : std::uint8_t {
  kColumnPass,  // each pass is row then column normalization
  kRowPass,     // one extra row normalization after the last pass
};

CandidateTable sinkhorn_sparse(CandidateTable table, double temperature, std::size_t iterations,
                               SinkhornFinish finish = SinkhornFinish::kColumnPass);

struct ExtractOptions {
  double threshold = 0.8;
  // false: every source keeps its best target if above threshold, even when
  // another source claims the same target.
  bool one_to_one = true;
};

AlignmentResult rank_and_extract(const CandidateTable& table, const ExtractOptions& options = {});

// "source<TAB>target<TAB>score" lines, rows in table order.
void write_candidate_table(const CandidateTable& table, const std::filesystem::path& path);

}  // namespace chronalign
