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

#include <gtest/gtest.h>

#include <set>

#include "chronalign/error.hpp"
#include "chronalign/parallel.hpp"
#include "chronalign/synthetic.hpp"

namespace chronalign {
namespace {

// Small enough for a unit test, large enough for the defaults to matter.
Config small_config() {
  Config c;
  c.dim = 64;
  c.topk = 50;
  return c;
}

SyntheticSpec noisy_spec() {
  SyntheticSpec spec;
  spec.entities = 400;
  spec.quadruples = 1600;
  spec.drop_fraction = 0.25;
  spec.time_noise = 0.2;
  spec.seed_fraction = 0.1;
  spec.rng_seed = 3;
  return spec;
}

void expect_same_metrics(const MetricsReport& a, const MetricsReport& b) {
  EXPECT_EQ(a.mrr, b.mrr);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.num_evaluated, b.num_evaluated);
}

TEST(Pipeline, IsomorphicCopyAlignsPerfectly) {
  SyntheticSpec spec;
  spec.seed_fraction = 0.1;
  const TkgPair pair = make_synthetic_pair(spec);
  Config config = small_config();
  config.mode = Mode::kSupervised;
  const PipelineOutput out = run_pipeline(pair, config);
  EXPECT_EQ(out.metrics.hits_at(1), 1.0);
  EXPECT_EQ(out.metrics.num_evaluated, pair.refs.size());
  EXPECT_EQ(out.state.iteration, 1u);
  EXPECT_DOUBLE_EQ(out.metrics.mrr, 1.0);
}

TEST(Pipeline, UnreachableThresholdMatchesSupervised) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config config = small_config();
  config.threshold = 1.0;
  const PipelineOutput semi = run_semi_supervised(pair, config);
  const PipelineOutput sup = run_supervised(pair, config);
  expect_same_metrics(semi.metrics, sup.metrics);
  EXPECT_TRUE(semi.state.accepted.empty());
  EXPECT_EQ(semi.state.iteration, 1u);
}

TEST(Pipeline, SemiSupervisedGrowsSeedsWithoutTouchingInitialOnes) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config config = small_config();
  std::vector<IterationLog> observed;
  const PipelineOutput out =
      run_semi_supervised(pair, config, [&](const IterationLog& log) { observed.push_back(log); });
  ASSERT_FALSE(out.state.accepted.empty());
  EXPECT_LE(out.state.iteration, config.max_semi_iters);
  EXPECT_EQ(observed.size(), out.state.history.size());

  std::size_t previous = pair.seeds.size();
  for (const auto& log : out.state.history) {
    EXPECT_GE(log.cumulative_seeds, previous);
    EXPECT_EQ(log.cumulative_seeds, previous + log.new_pairs);
    previous = log.cumulative_seeds;
  }
  EXPECT_EQ(out.state.seeds.size(), pair.seeds.size() + out.state.accepted.size());

  std::set<EntityId> initial_sources, initial_targets, sources, targets;
  for (const auto& s : pair.seeds) {
    initial_sources.insert(s.source);
    initial_targets.insert(s.target);
  }
  std::set<EntityPair> truth(pair.refs.begin(), pair.refs.end());
  std::size_t correct = 0;
  for (const auto& a : out.state.accepted) {
    EXPECT_FALSE(initial_sources.contains(a.pair.source));
    EXPECT_FALSE(initial_targets.contains(a.pair.target));
    EXPECT_TRUE(sources.insert(a.pair.source).second);
    EXPECT_TRUE(targets.insert(a.pair.target).second);
    EXPECT_GT(a.score, config.threshold);
    correct += truth.contains(a.pair);
  }
  EXPECT_GE(static_cast<double>(correct), 0.9 * static_cast<double>(out.state.accepted.size()));

  // Metrics always cover every reference pair, pseudo-seeded or not.
  EXPECT_EQ(out.metrics.num_evaluated, pair.refs.size());
  const PipelineOutput sup = run_supervised(pair, config);
  EXPECT_GE(out.metrics.hits_at(1), sup.metrics.hits_at(1));
}

TEST(Pipeline, DeterministicAcrossRunsAndThreadCounts) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config config = small_config();
  config.threads = 1;
  const PipelineOutput a = run_semi_supervised(pair, config);
  config.threads = 4;
  const PipelineOutput b = run_semi_supervised(pair, config);
  expect_same_metrics(a.metrics, b.metrics);
  EXPECT_EQ(a.state.accepted, b.state.accepted);
  EXPECT_EQ(a.result.pairs, b.result.pairs);

  config.rng_seed = 1;
  const PipelineOutput c = run_semi_supervised(pair, config);
  EXPECT_NE(a.state.accepted, c.state.accepted);
}

TEST(Pipeline, RestoresThreadSetting) {
  set_num_threads(0);
  Config config = small_config();
  config.threads = 2;
  config.mode = Mode::kSupervised;
  SyntheticSpec spec;
  spec.entities = 50;
  spec.quadruples = 200;
  run_pipeline(make_synthetic_pair(spec), config);
  EXPECT_EQ(thread_setting(), 0u);
}

TEST(Pipeline, AblationSwitchesMakeTheirParametersInert) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config base = small_config();
  base.mode = Mode::kSupervised;

  auto run_with = [&](auto tweak) {
    Config c = base;
    tweak(c);
    return run_pipeline(pair, c).metrics;
  };
  expect_same_metrics(run_with([](Config& c) { c.disable_tlp = true; c.alpha = 0.1; }),
                      run_with([](Config& c) { c.disable_tlp = true; c.alpha = 0.9; }));
  expect_same_metrics(run_with([](Config& c) { c.disable_tc = true; c.beta = 0.0; }),
                      run_with([](Config& c) { c.disable_tc = true; c.beta = 1.0; }));
  expect_same_metrics(run_with([](Config& c) { c.disable_so = true; c.sinkhorn_iters = 1; }),
                      run_with([](Config& c) { c.disable_so = true; c.sinkhorn_iters = 40; }));
  // Without the switch, the parameters do change the result.
  EXPECT_NE(run_with([](Config& c) { c.beta = 0.0; }).mrr, run_with([](Config& c) { c.beta = 1.0; }).mrr);
}

TEST(Pipeline, TwoWayAveragesBothDirections) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config config = small_config();
  config.mode = Mode::kSupervised;
  config.direction = Direction::kBoth;
  const PipelineOutput both = run_pipeline(pair, config);
  EXPECT_GT(both.metrics.hits_at(1), 0.0);
  EXPECT_LE(both.metrics.hits_at(1), 1.0);
  EXPECT_TRUE(both.timings.contains("retrieval"));
}

TEST(Pipeline, PreSinkhornAcceptanceUsesFusedScores) {
  const TkgPair pair = make_synthetic_pair(noisy_spec());
  Config config = small_config();
  config.accept_on = AcceptanceScores::kPreSinkhorn;
  config.threshold = 0.6;
  const PipelineOutput out = run_semi_supervised(pair, config);
  for (const auto& a : out.state.accepted) {
    EXPECT_GT(a.score, 0.6);
    EXPECT_LE(a.score, 1.0 + 1e-6);
  }
}

TEST(Pipeline, RecordsPhaseTimingsAndConfig) {
  SyntheticSpec spec;
  spec.entities = 60;
  spec.quadruples = 240;
  Config config = small_config();
  config.mode = Mode::kSupervised;
  const PipelineOutput out = run_pipeline(make_synthetic_pair(spec), config);
  for (const char* phase : {"preprocess", "propagation", "retrieval", "time_constraints", "sinkhorn",
                            "extraction", "evaluation"}) {
    EXPECT_TRUE(out.timings.contains(phase)) << phase;
  }
  EXPECT_EQ(out.metrics.config, config);
  EXPECT_GT(out.metrics.wall_clock_seconds, 0.0);
}

TEST(Pipeline, RejectsInvalidInputs) {
  SyntheticSpec spec;
  spec.entities = 40;
  spec.quadruples = 100;
  TkgPair pair = make_synthetic_pair(spec);
  Config config = small_config();
  config.alpha = 2.0;
  EXPECT_THROW(run_pipeline(pair, config), ContractViolation);
  pair.refs.push_back(pair.seeds.front());
  EXPECT_THROW(run_pipeline(pair, small_config()), ValidationError);
}

TEST(Pipeline, IterationLogLine) {
  const IterationLog log{.iteration = 2, .new_pairs = 17, .cumulative_seeds = 317, .hits_at_1 = 0.95,
                         .mrr = 0.96, .elapsed_seconds = 1.5};
  EXPECT_EQ(format_iteration_log(log), "iter=2 new_pairs=17 seeds=317 hits@1=0.9500 elapsed=1.50s");
}

}  // namespace
}  // namespace chronalign
