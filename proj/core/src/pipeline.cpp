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

#include "chronalign/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <unordered_set>

#include "chronalign/label_propagation.hpp"
#include "chronalign/parallel.hpp"
#include "chronalign/temporal.hpp"

namespace chronalign {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class ThreadScope {
 public:
  explicit ThreadScope(std::size_t n) : previous_(thread_setting()) { set_num_threads(n); }
  ~ThreadScope() { set_num_threads(previous_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  std::size_t previous_;
};

class PhaseTimer {
 public:
  PhaseTimer(PhaseTimings& timings, const char* phase)
      : timings_(timings), phase_(phase), start_(Clock::now()) {}
  ~PhaseTimer() { timings_[phase_] += seconds_since(start_); }
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;

 private:
  PhaseTimings& timings_;
  const char* phase_;
  Clock::time_point start_;
};

DenseMatrix gather_rows(const DenseMatrix& labels, std::size_t offset,
                        const std::vector<EntityId>& ids) {
  DenseMatrix out(ids.size(), labels.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto src = labels.row(offset + ids[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

struct PassOutput {
  AlignmentResult result;
  MetricsReport metrics;
  CandidateTable raw_candidates;
  CandidateTable candidates;
};

// Seed-independent structures, built once per run.
class Aligner {
 public:
  Aligner(const TkgPair& pair, const Config& config, PhaseTimings& timings)
      : pair_(pair), config_(config), timings_(timings) {
    PhaseTimer timer(timings_, "preprocess");
    views_ = build_adjacency_views(pair, {.binarize = config.binarize_adjacency});
    bags_ = collect_time_bags(pair, {.double_insert_point_events = config.point_event_double_insert});
    for (const auto& ref : pair.refs) {
      ref_sources_.push_back(ref.source);
      ref_targets_.push_back(ref.target);
    }
    reversed_refs_.reserve(pair.refs.size());
    for (const auto& ref : pair.refs) reversed_refs_.push_back({ref.target, ref.source});
  }

  PassOutput run_pass(const std::vector<EntityPair>& seeds, std::uint64_t label_seed) {
    DenseMatrix fused;
    {
      PhaseTimer timer(timings_, "propagation");
      const DenseMatrix init = init_entity_labels(views_.g1_entities, views_.g2_entities, seeds,
                                                  config_.dim, label_seed);
      DenseMatrix rel = run_aspect(views_, init, config_.rounds, Aspect::kRelational);
      if (config_.disable_tlp) {
        fused = std::move(rel);
      } else {
        const DenseMatrix temp = run_aspect(views_, init, config_.rounds, Aspect::kTemporal);
        fused = fuse_labels(rel, temp, config_.alpha);
      }
    }
    DenseMatrix sources = gather_rows(fused, 0, ref_sources_);
    DenseMatrix targets = gather_rows(fused, views_.g2_offset(), ref_targets_);
    fused = DenseMatrix();
    if (config_.normalize_retrieval) {
      sources = l2_normalize_rows(std::move(sources));
      targets = l2_normalize_rows(std::move(targets));
    }

    PassOutput out;
    out.result = align_direction(sources, ref_sources_, targets, ref_targets_, bags_.g1, bags_.g2,
                                 &out.raw_candidates, &out.candidates);
    {
      PhaseTimer timer(timings_, "extraction");
      const ExtractOptions extract{.threshold = config_.threshold, .one_to_one = config_.one_to_one};
      if (config_.accept_on == AcceptanceScores::kPreSinkhorn && !config_.disable_so) {
        out.result.pairs = rank_and_extract(out.raw_candidates, extract).pairs;
      }
    }
    {
      PhaseTimer timer(timings_, "evaluation");
      out.metrics = evaluate(out.result, pair_.refs);
    }
    if (config_.direction == Direction::kBoth) {
      const AlignmentResult reverse =
          align_direction(targets, ref_targets_, sources, ref_sources_, bags_.g2, bags_.g1, nullptr, nullptr);
      PhaseTimer timer(timings_, "evaluation");
      out.metrics = average(out.metrics, evaluate(reverse, reversed_refs_));
    }
    return out;
  }

 private:
  // Retrieval through ranking for one direction. The optional outputs
  // receive the table before and after Sinkhorn.
  AlignmentResult align_direction(const DenseMatrix& sources, const std::vector<EntityId>& source_ids,
                                  const DenseMatrix& targets, const std::vector<EntityId>& target_ids,
                                  const std::vector<TimeBag>& source_bags,
                                  const std::vector<TimeBag>& target_bags,
                                  CandidateTable* pre_sinkhorn, CandidateTable* final_table) {
    CandidateTable table;
    {
      PhaseTimer timer(timings_, "retrieval");
      table = topk_candidates(sources, source_ids, targets, target_ids, config_.topk);
    }
    if (!config_.disable_tc) {
      PhaseTimer timer(timings_, "time_constraints");
      table = apply_time_constraints(std::move(table), source_bags, target_bags, config_.beta);
    }
    if (pre_sinkhorn != nullptr) *pre_sinkhorn = table;
    if (!config_.disable_so) {
      PhaseTimer timer(timings_, "sinkhorn");
      table = sinkhorn_sparse(std::move(table), config_.temperature, config_.sinkhorn_iters);
    }
    AlignmentResult result;
    {
      PhaseTimer timer(timings_, "extraction");
      result = rank_and_extract(table, {.threshold = config_.threshold, .one_to_one = config_.one_to_one});
    }
    if (final_table != nullptr) *final_table = std::move(table);
    return result;
  }

  const TkgPair& pair_;
  const Config& config_;
  PhaseTimings& timings_;
  AdjacencyViews views_;
  TimeBagTable bags_;
  std::vector<EntityId> ref_sources_;
  std::vector<EntityId> ref_targets_;
  std::vector<EntityPair> reversed_refs_;
};

PipelineOutput run_loop(const TkgPair& pair, const Config& config, std::size_t max_passes,
                        const IterationObserver& observer) {
  config.validate();
  train_test_split_check(pair);
  ThreadScope threads(config.threads);
  const auto start = Clock::now();

  PipelineOutput out;
  Aligner aligner(pair, config, out.timings);
  out.state.seeds = pair.seeds;

  std::unordered_set<EntityId> seeded_sources, seeded_targets;
  for (const auto& s : pair.seeds) {
    seeded_sources.insert(s.source);
    seeded_targets.insert(s.target);
  }

  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    const std::uint64_t label_seed = pass == 0 ? config.rng_seed : splitmix64(config.rng_seed + pass);
    PassOutput result = aligner.run_pass(out.state.seeds, label_seed);
    out.state.iteration = pass + 1;

    std::size_t accepted = 0;
    const bool last = pass + 1 == max_passes;
    if (!last) {
      for (const auto& p : result.result.pairs) {
        if (p.score <= config.threshold) continue;
        if (seeded_sources.contains(p.pair.source) || seeded_targets.contains(p.pair.target)) continue;
        seeded_sources.insert(p.pair.source);
        seeded_targets.insert(p.pair.target);
        out.state.seeds.push_back(p.pair);
        out.state.accepted.push_back({p.pair, p.score, pass});
        ++accepted;
      }
    }

    IterationLog log{.iteration = pass,
                     .new_pairs = accepted,
                     .cumulative_seeds = out.state.seeds.size(),
                     .hits_at_1 = result.metrics.hits_at(1),
                     .mrr = result.metrics.mrr,
                     .elapsed_seconds = seconds_since(start)};
    out.state.history.push_back(log);
    if (observer) observer(log);

    out.metrics = std::move(result.metrics);
    out.result = std::move(result.result);
    out.raw_candidates = std::move(result.raw_candidates);
    out.candidates = std::move(result.candidates);
    if (accepted == 0) break;
  }
  out.metrics.config = config;
  out.metrics.wall_clock_seconds = seconds_since(start);
  return out;
}

}  // namespace

PipelineOutput run_supervised(const TkgPair& pair, const Config& config,
                              const IterationObserver& observer) {
  return run_loop(pair, config, 1, observer);
}

PipelineOutput run_semi_supervised(const TkgPair& pair, const Config& config,
                                   const IterationObserver& observer) {
  return run_loop(pair, config, config.max_semi_iters, observer);
}

PipelineOutput run_pipeline(const TkgPair& pair, const Config& config,
                            const IterationObserver& observer) {
  return config.mode == Mode::kSupervised ? run_supervised(pair, config, observer)
                                          : run_semi_supervised(pair, config, observer);
}

std::string format_iteration_log(const IterationLog& log) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "iter=%zu new_pairs=%zu seeds=%zu hits@1=%.4f elapsed=%.2fs",
                log.iteration, log.new_pairs, log.cumulative_seeds, log.hits_at_1,
                log.elapsed_seconds);
  return buffer;
}

}  // namespace chronalign
