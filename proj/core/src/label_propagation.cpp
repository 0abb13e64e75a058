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

#include "chronalign/label_propagation.hpp"

#include <cmath>
#include <random>
#include <string>

#include "chronalign/error.hpp"

namespace chronalign {
namespace {

void require_shape(const DenseMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

void add_into(DenseMatrix& dst, const DenseMatrix& src) {
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

LabelState propagate(const SparseMatrix& a_ee, const SparseMatrix& a_ex, const SparseMatrix& a_xe,
                     const LabelState& state, const PropagationOptions& options) {
  if (state.history.empty()) throw ContractViolation("propagate: label state has no history");
  const std::size_t dim = state.l_e.cols();
  require_shape(state.l_e, a_ee.rows(), dim, "entity labels");
  require_shape(state.l_aux, a_xe.rows(), dim, "auxiliary labels");

  LabelState next;
  next.l_e = spmm(a_ee, state.l_e);
  add_into(next.l_e, spmm(a_ex, state.l_aux));
  next.l_aux = spmm(a_xe, state.l_e);
  if (options.normalize) {
    next.l_e = l2_normalize_rows(std::move(next.l_e));
    next.l_aux = l2_normalize_rows(std::move(next.l_aux));
  }
  next.history = state.history;
  next.history.push_back(next.l_e);
  return next;
}

}  // namespace

AdjacencyViews build_adjacency_views(const TkgPair& pair, const ViewOptions& options) {
  validate_ids(pair);
  AdjacencyViews views;
  views.g1_entities = pair.g1.num_entities;
  views.g2_entities = pair.g2.num_entities;
  views.g1_relations = pair.g1.num_relations;
  views.g2_relations = pair.g2.num_relations;
  views.num_times = pair.num_times;

  const std::size_t n_ent = views.num_entities();
  const std::size_t n_rel = views.num_relations();
  const std::size_t quads = pair.g1.quadruples.size() + pair.g2.quadruples.size();

  std::vector<Triplet> ee, er, re, et;
  ee.reserve(2 * quads);
  er.reserve(2 * quads);
  re.reserve(2 * quads);
  et.reserve(4 * quads);

  auto scan = [&](const Tkg& g, std::size_t entity_offset, std::size_t relation_offset) {
    for (const auto& q : g.quadruples) {
      const auto h = static_cast<Index>(entity_offset + q.head);
      const auto t = static_cast<Index>(entity_offset + q.tail);
      const auto r = static_cast<Index>(relation_offset + q.rel);
      const auto r_inv = static_cast<Index>(r + n_rel);
      if (h != t) {
        ee.push_back({h, t, 1});
        ee.push_back({t, h, 1});
      }
      er.push_back({h, r, 1});
      er.push_back({t, r_inv, 1});
      re.push_back({r, t, 1});
      re.push_back({r_inv, h, 1});
      auto add_time = [&](TimeId tau) {
        if (tau == kUnobservedTime) return;
        et.push_back({h, static_cast<Index>(tau), 1});
        et.push_back({t, static_cast<Index>(tau), 1});
      };
      add_time(q.time_begin);
      if (q.time_end != q.time_begin) add_time(q.time_end);
    }
  };
  scan(pair.g1, 0, 0);
  scan(pair.g2, views.g1_entities, views.g1_relations);

  auto finish = [&](std::size_t rows, std::size_t cols, std::vector<Triplet>& triplets) {
    SparseMatrix m = SparseMatrix::from_triplets(rows, cols, std::move(triplets));
    if (options.binarize) {
      m = SparseMatrix(m.rows(), m.cols(),
                       std::vector<std::size_t>(m.row_offsets().begin(), m.row_offsets().end()),
                       std::vector<Index>(m.col_indices().begin(), m.col_indices().end()),
                       std::vector<Real>(m.nnz(), Real{1}));
    }
    return m;
  };
  const SparseMatrix et_counts = finish(n_ent, pair.num_times, et);
  views.a_ee = row_normalize_l1(finish(n_ent, n_ent, ee));
  views.a_er = row_normalize_l1(finish(n_ent, 2 * n_rel, er));
  views.a_re = row_normalize_l1(finish(2 * n_rel, n_ent, re));
  views.a_te = row_normalize_l1(transpose(et_counts));
  views.a_et = row_normalize_l1(et_counts);
  return views;
}

DenseMatrix init_entity_labels(std::size_t g1_entities, std::size_t g2_entities,
                               std::span<const EntityPair> seeds, std::size_t dim,
                               std::uint64_t rng_seed) {
  if (dim < 1) throw ContractViolation("init_entity_labels: dim must be >= 1");
  DenseMatrix labels(g1_entities + g2_entities, dim);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> sample(dim);
  for (const auto& seed : seeds) {
    if (seed.source >= g1_entities || seed.target >= g2_entities) {
      throw ContractViolation("init_entity_labels: seed entity out of range");
    }
    double sq = 0.0;
    do {
      sq = 0.0;
      for (auto& v : sample) {
        v = normal(rng);
        sq += v * v;
      }
    } while (sq <= kNormEpsilon);
    const double inv = 1.0 / std::sqrt(sq);
    auto a = labels.row(seed.source);
    auto b = labels.row(g1_entities + seed.target);
    for (std::size_t c = 0; c < dim; ++c) {
      a[c] = b[c] = static_cast<Real>(sample[c] * inv);
    }
  }
  return labels;
}

DenseMatrix init_entity_labels(const TkgPair& pair, std::size_t dim, std::uint64_t rng_seed) {
  return init_entity_labels(pair.g1.num_entities, pair.g2.num_entities, pair.seeds, dim, rng_seed);
}

LabelState initial_state(const AdjacencyViews& views, const DenseMatrix& init, Aspect aspect) {
  require_shape(init, views.num_entities(), init.cols(), "initial entity labels");
  LabelState state;
  state.l_e = init;
  const std::size_t aux_rows =
      aspect == Aspect::kRelational ? views.a_re.rows() : views.a_te.rows();
  state.l_aux = DenseMatrix(aux_rows, init.cols());
  state.history.push_back(init);
  return state;
}

LabelState propagate_relational(const AdjacencyViews& views, const LabelState& state,
                                const PropagationOptions& options) {
  return propagate(views.a_ee, views.a_er, views.a_re, state, options);
}

LabelState propagate_temporal(const AdjacencyViews& views, const LabelState& state,
                              const PropagationOptions& options) {
  return propagate(views.a_ee, views.a_et, views.a_te, state, options);
}

DenseMatrix run_aspect(const AdjacencyViews& views, const DenseMatrix& init, std::size_t rounds,
                       Aspect aspect, const PropagationOptions& options) {
  if (rounds < 1) throw ContractViolation("run_aspect: rounds must be >= 1");
  LabelState state = initial_state(views, init, aspect);
  for (std::size_t i = 0; i < rounds; ++i) {
    state = aspect == Aspect::kRelational ? propagate_relational(views, state, options)
                                          : propagate_temporal(views, state, options);
  }
  const std::size_t dim = init.cols();
  DenseMatrix out(init.rows(), dim * (rounds + 1));
  for (std::size_t step = 0; step < state.history.size(); ++step) {
    const auto& snapshot = state.history[step];
    for (std::size_t r = 0; r < out.rows(); ++r) {
      const auto src = snapshot.row(r);
      std::copy(src.begin(), src.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(step * dim));
    }
  }
  return out;
}

DenseMatrix fuse_labels(const DenseMatrix& rel, const DenseMatrix& temp, double alpha) {
  if (rel.rows() != temp.rows() || rel.cols() != temp.cols()) {
    throw ContractViolation("fuse_labels: shape mismatch");
  }
  if (alpha == 0.0) return rel;
  if (alpha == 1.0) return temp;
  DenseMatrix out(rel.rows(), rel.cols());
  auto o = out.values();
  auto a = rel.values();
  auto b = temp.values();
  const double keep = 1.0 - alpha;
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = static_cast<Real>(keep * a[i] + alpha * b[i]);
  }
  return out;
}

}  // namespace chronalign
