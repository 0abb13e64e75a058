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

#include <benchmark/benchmark.h>

#include <random>

#include "chronalign/label_propagation.hpp"
#include "chronalign/matching.hpp"
#include "chronalign/sparse.hpp"
#include "chronalign/synthetic.hpp"

namespace chronalign {
namespace {

DenseMatrix random_labels(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  DenseMatrix m(rows, cols);
  for (Real& v : m.values()) v = normal(rng);
  return l2_normalize_rows(std::move(m));
}

// Entity view of a graph with roughly DICEWS-200 density.
const AdjacencyViews& views() {
  static const AdjacencyViews v = [] {
    SyntheticSpec spec;
    spec.entities = 9500;
    spec.relations = 250;
    spec.timestamps = 4000;
    spec.quadruples = 300000;
    spec.drop_fraction = 0.1;
    return build_adjacency_views(make_synthetic_pair(spec));
  }();
  return v;
}

void BM_Spmm(benchmark::State& state) {
  const auto& v = views();
  const DenseMatrix labels = random_labels(v.a_ee.cols(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(spmm(v.a_ee, labels));
  state.counters["nnz"] = static_cast<double>(v.a_ee.nnz());
}
BENCHMARK(BM_Spmm)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TopK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DenseMatrix src = random_labels(n, 1536, 2);
  const DenseMatrix tgt = random_labels(n, 1536, 3);
  for (auto _ : state) benchmark::DoNotOptimize(topk_candidates(src, tgt, 500));
}
BENCHMARK(BM_TopK)->Arg(2000)->Arg(7500)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CandidateTable table = topk_candidates(random_labels(n, 64, 4), random_labels(n, 64, 5), 500);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_sparse(table, 0.05, 15));
}
BENCHMARK(BM_Sinkhorn)->Arg(2000)->Arg(7500)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace chronalign
