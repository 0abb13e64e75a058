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

#include "chronalign/matching.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_set>

#include "chronalign/error.hpp"
#include "chronalign/parallel.hpp"

namespace chronalign {
namespace {

using RowMajorMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fixed retrieval block; keeps the product shapes, and so the float
// rounding, independent of the thread count.
constexpr std::size_t kRetrievalBlock = 128;
constexpr std::size_t kRowGrain = 512;

std::vector<EntityId> iota_ids(std::size_t n) {
  std::vector<EntityId> ids(n);
  std::iota(ids.begin(), ids.end(), EntityId{0});
  return ids;
}

}  // namespace

CandidateTable CandidateTable::from_rows(std::vector<EntityId> source_ids,
                                         std::vector<std::vector<Candidate>> rows) {
  if (source_ids.size() != rows.size()) {
    throw ContractViolation("candidate table: source id count differs from row count");
  }
  CandidateTable table;
  table.capacity_ = rows.empty() ? 0 : rows.front().size();
  table.cells_.reserve(rows.size() * table.capacity_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != table.capacity_) {
      throw ContractViolation("candidate table: rows must share one capacity");
    }
    std::unordered_set<EntityId> seen;
    for (const auto& c : rows[r]) {
      if (!std::isfinite(c.score)) throw ContractViolation("candidate table: non-finite score");
      if (!seen.insert(c.target).second) {
        throw ContractViolation("candidate table: duplicate target " + std::to_string(c.target) +
                                " in row " + std::to_string(r));
      }
    }
    table.cells_.insert(table.cells_.end(), rows[r].begin(), rows[r].end());
  }
  table.source_ids_ = std::move(source_ids);
  table.sort_rows();
  return table;
}

void CandidateTable::sort_rows() {
  for (std::size_t r = 0; r < num_rows(); ++r) {
    auto cells = row(r);
    std::sort(cells.begin(), cells.end(), ranks_before);
  }
}

CandidateTable topk_candidates(const DenseMatrix& source_labels, std::span<const EntityId> source_ids,
                               const DenseMatrix& target_labels, std::span<const EntityId> target_ids,
                               std::size_t k) {
  if (target_labels.rows() == 0) throw ContractViolation("topk_candidates: no targets");
  if (source_labels.cols() == 0 || target_labels.cols() == 0) {
    throw ContractViolation("topk_candidates: zero-width labels");
  }
  if (source_labels.cols() != target_labels.cols()) {
    throw ContractViolation("topk_candidates: label widths differ");
  }
  if (k < 1) throw ContractViolation("topk_candidates: k must be >= 1");
  if (source_ids.size() != source_labels.rows() || target_ids.size() != target_labels.rows()) {
    throw ContractViolation("topk_candidates: id lists do not match label rows");
  }

  const std::size_t n_targets = target_labels.rows();
  const std::size_t width = source_labels.cols();
  k = std::min(k, n_targets);

  CandidateTable table;
  table.source_ids_.assign(source_ids.begin(), source_ids.end());
  table.capacity_ = k;
  table.cells_.resize(source_labels.rows() * k);

  const Eigen::Map<const RowMajorMatrix> targets(target_labels.values().data(),
                                                 static_cast<Eigen::Index>(n_targets),
                                                 static_cast<Eigen::Index>(width));
  parallel_for(source_labels.rows(), kRetrievalBlock, [&](std::size_t begin, std::size_t end) {
    const Eigen::Map<const RowMajorMatrix> sources(source_labels.row(begin).data(),
                                                   static_cast<Eigen::Index>(end - begin),
                                                   static_cast<Eigen::Index>(width));
    RowMajorMatrix scores = sources * targets.transpose();
    std::vector<Candidate> scratch(n_targets);
    for (std::size_t r = begin; r < end; ++r) {
      const float* row_scores = scores.row(static_cast<Eigen::Index>(r - begin)).data();
      for (std::size_t j = 0; j < n_targets; ++j) scratch[j] = {target_ids[j], row_scores[j]};
      auto kth = scratch.begin() + static_cast<std::ptrdiff_t>(k);
      if (k < n_targets) std::nth_element(scratch.begin(), kth - 1, scratch.end(), ranks_before);
      std::sort(scratch.begin(), kth, ranks_before);
      std::copy(scratch.begin(), kth, table.cells_.begin() + static_cast<std::ptrdiff_t>(r * k));
    }
  });
  return table;
}

CandidateTable topk_candidates(const DenseMatrix& source_labels, const DenseMatrix& target_labels,
                               std::size_t k) {
  const auto sources = iota_ids(source_labels.rows());
  const auto targets = iota_ids(target_labels.rows());
  return topk_candidates(source_labels, sources, target_labels, targets, k);
}

CandidateTable apply_time_constraints(CandidateTable table, std::span<const TimeBag> source_bags,
                                      std::span<const TimeBag> target_bags, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ContractViolation("apply_time_constraints: beta outside [0, 1]");
  if (beta == 0.0) return table;
  const double keep = 1.0 - beta;
  TimeId max_time = 0;
  for (const auto& b : source_bags)
    if (!b.counts.empty()) max_time = std::max(max_time, b.counts.back().first);
  parallel_for(table.num_rows(), kRowGrain, [&](std::size_t begin, std::size_t end) {
    // The source bag is scattered once per row so each target costs only
    // its own bag length. Same integer intersection as time_similarity.
    std::vector<std::uint32_t> dense(static_cast<std::size_t>(max_time) + 1, 0);
    for (std::size_t r = begin; r < end; ++r) {
      const EntityId source = table.source_id(r);
      if (source >= source_bags.size()) {
        throw ContractViolation("apply_time_constraints: no time bag for source " + std::to_string(source));
      }
      const TimeBag& a = source_bags[source];
      for (const auto& [t, c] : a.counts) dense[t] = c;
      for (auto& cell : table.row(r)) {
        if (cell.target >= target_bags.size()) {
          throw ContractViolation("apply_time_constraints: no time bag for target " +
                                  std::to_string(cell.target));
        }
        const TimeBag& b = target_bags[cell.target];
        double sim = 0.0;
        if (const std::uint64_t denom = a.total + b.total; denom > 0) {
          std::uint64_t shared = 0;
          for (const auto& [t, c] : b.counts) {
            if (t <= max_time) shared += std::min(dense[t], c);
          }
          sim = 2.0 * static_cast<double>(shared) / static_cast<double>(denom);
        }
        cell.score = keep * cell.score + beta * sim;
      }
      for (const auto& [t, c] : a.counts) dense[t] = 0;
    }
  });
  table.sort_rows();
  return table;
}

CandidateTable sinkhorn_sparse(CandidateTable table, double temperature, std::size_t iterations,
                               SinkhornFinish finish) {
  if (!(temperature > 0.0)) throw ContractViolation("sinkhorn_sparse: temperature must be > 0");
  if (iterations < 1) throw ContractViolation("sinkhorn_sparse: iterations must be >= 1");
  const std::size_t rows = table.num_rows();
  if (rows == 0 || table.capacity() == 0) return table;

  EntityId max_target = 0;
  for (const auto& c : table.cells()) max_target = std::max(max_target, c.target);
  std::vector<double> column_sums(static_cast<std::size_t>(max_target) + 1);

  parallel_for(rows, kRowGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto cells = table.row(r);
      double shift = cells.front().score;
      for (const auto& c : cells) shift = std::max(shift, c.score);
      for (auto& c : cells) c.score = std::exp((c.score - shift) / temperature);
    }
  });

  auto row_pass = [&] {
    parallel_for(rows, kRowGrain, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        auto cells = table.row(r);
        double sum = 0.0;
        for (const auto& c : cells) sum += c.score;
        if (sum > 0.0) {
          for (auto& c : cells) c.score /= sum;
        }
      }
    });
  };
  for (std::size_t pass = 0; pass < iterations; ++pass) {
    row_pass();
    // Column sums scatter in table order for a fixed reduction order.
    std::fill(column_sums.begin(), column_sums.end(), 0.0);
    for (const auto& c : table.cells()) column_sums[c.target] += c.score;
    parallel_for(rows, kRowGrain, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        for (auto& c : table.row(r)) {
          const double sum = column_sums[c.target];
          if (sum > 0.0) c.score /= sum;
        }
      }
    });
  }
  if (finish == SinkhornFinish::kRowPass) row_pass();
  table.sort_rows();
  return table;
}

AlignmentResult rank_and_extract(const CandidateTable& table, const ExtractOptions& options) {
  AlignmentResult result;
  result.ranked.reserve(table.num_rows());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    RankedList list;
    list.source = table.source_id(r);
    list.candidates.assign(table.row(r).begin(), table.row(r).end());
    std::sort(list.candidates.begin(), list.candidates.end(), ranks_before);
    result.ranked.push_back(std::move(list));
  }

  std::vector<ScoredPair> proposals;
  for (const auto& list : result.ranked) {
    if (options.one_to_one) {
      for (const auto& c : list.candidates) {
        if (c.score <= options.threshold) break;
        proposals.push_back({{list.source, c.target}, c.score});
      }
    } else if (!list.candidates.empty() && list.candidates.front().score > options.threshold) {
      proposals.push_back({{list.source, list.candidates.front().target},
                           list.candidates.front().score});
    }
  }
  std::sort(proposals.begin(), proposals.end(), [](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pair < b.pair;
  });
  if (!options.one_to_one) {
    result.pairs = std::move(proposals);
    return result;
  }
  std::unordered_set<EntityId> claimed_sources, claimed_targets;
  for (const auto& p : proposals) {
    if (claimed_sources.contains(p.pair.source) || claimed_targets.contains(p.pair.target)) continue;
    claimed_sources.insert(p.pair.source);
    claimed_targets.insert(p.pair.target);
    result.pairs.push_back(p);
  }
  return result;
}

void write_candidate_table(const CandidateTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write candidate dump " + path.string());
  char buffer[64];
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (const auto& c : table.row(r)) {
      std::snprintf(buffer, sizeof(buffer), "%.9g", c.score);
      out << table.source_id(r) << '\t' << c.target << '\t' << buffer << '\n';
    }
  }
}

}  // namespace chronalign
