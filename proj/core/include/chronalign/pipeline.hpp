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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chronalign/evaluation.hpp"
#include "chronalign/graph_model.hpp"
#include "chronalign/matching.hpp"

namespace chronalign {

struct IterationLog {
  std::size_t iteration = 0;
  std::size_t new_pairs = 0;
  std::size_t cumulative_seeds = 0;
  double hits_at_1 = 0.0;
  double mrr = 0.0;
  double elapsed_seconds = 0.0;
};

struct AcceptedPair {
  EntityPair pair;
  double score = 0.0;
  std::size_t iteration = 0;

  friend bool operator==(const AcceptedPair&, const AcceptedPair&) = default;
};

struct RunState {
  std::vector<EntityPair> seeds;  // initial seeds followed by accepted pairs
  std::size_t iteration = 0;      // passes completed
  std::vector<IterationLog> history;
  std::vector<AcceptedPair> accepted;
};

// Seconds per phase, summed over all passes, keyed by phase name.
using PhaseTimings = std::map<std::string, double>;

struct PipelineOutput {
  MetricsReport metrics;
  AlignmentResult result;
  // Forward-direction candidates of the last pass, before and after Sinkhorn
  // (identical when Sinkhorn is disabled).
  CandidateTable raw_candidates;
  CandidateTable candidates;
  RunState state;
  PhaseTimings timings;
};

using IterationObserver = std::function<void(const IterationLog&)>;

// One pass: labels -> fusion -> top-k -> time constraints -> Sinkhorn ->
// extraction -> evaluation over pair.refs. Ablation switches skip stages.
PipelineOutput run_supervised(const TkgPair& pair, const Config& config,
                              const IterationObserver& observer = {});

// Repeats the pass, promoting extracted pairs above config.threshold whose
// entities are not yet seeded, until nothing new is accepted or
// config.max_semi_iters passes ran. Metrics always cover all of pair.refs.
PipelineOutput run_semi_supervised(const TkgPair& pair, const Config& config,
                                   const IterationObserver& observer = {});

// Dispatches on config.mode.
PipelineOutput run_pipeline(const TkgPair& pair, const Config& config,
                            const IterationObserver& observer = {});

// "iter=<i> new_pairs=<n> seeds=<s> hits@1=<h> elapsed=<t>s".
std::string format_iteration_log(const IterationLog& log);

}  // namespace chronalign
