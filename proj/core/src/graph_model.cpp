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

#include "chronalign/graph_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "chronalign/error.hpp"

namespace chronalign {
namespace {

namespace fs = std::filesystem;

std::string location(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

// Splits on tabs; runs of spaces are tolerated as separators too.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::uint64_t parse_id(std::string_view field, const fs::path& file, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IngestionError(location(file, line) + ": expected a non-negative integer id, got '" +
                         std::string(field) + "'");
  }
  return value;
}

// Reads every non-blank line, stripping a trailing '\r'.
template <typename Fn>
void for_each_line(const fs::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) throw IngestionError("cannot open dataset file " + file.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    fn(fields, number);
  }
}

struct RawQuad {
  std::uint64_t head, rel, tail, time_begin, time_end;
  std::size_t line;
};

std::vector<RawQuad> read_quads(const fs::path& file, const std::array<QuadColumn, 5>& columns) {
  std::vector<RawQuad> quads;
  for_each_line(file, [&](const std::vector<std::string_view>& fields, std::size_t line) {
    if (fields.size() != 4 && fields.size() != 5) {
      throw IngestionError(location(file, line) + ": expected 4 or 5 fields, got " +
                           std::to_string(fields.size()));
    }
    RawQuad q{0, 0, 0, 0, 0, line};
    bool has_end = false;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = parse_id(fields[c], file, line);
      switch (columns[c]) {
        case QuadColumn::kHead: q.head = v; break;
        case QuadColumn::kRel: q.rel = v; break;
        case QuadColumn::kTail: q.tail = v; break;
        case QuadColumn::kTimeBegin: q.time_begin = v; break;
        case QuadColumn::kTimeEnd: q.time_end = v; has_end = true; break;
      }
    }
    if (fields.size() == 4) {
      // The missing column must be the end stamp for a point event reading.
      if (std::find(columns.begin(), columns.begin() + 4, QuadColumn::kTimeEnd) !=
          columns.begin() + 4) {
        throw IngestionError(location(file, line) +
                             ": four-field line but column order places time_end before column 5");
      }
    }
    if (!has_end) q.time_end = q.time_begin;
    quads.push_back(q);
  });
  return quads;
}

struct RawPair {
  std::uint64_t source, target;
  std::size_t line;
};

std::vector<RawPair> read_pairs(const fs::path& file) {
  std::vector<RawPair> pairs;
  for_each_line(file, [&](const std::vector<std::string_view>& fields, std::size_t line) {
    if (fields.size() != 2) {
      throw IngestionError(location(file, line) + ": expected 2 fields, got " +
                           std::to_string(fields.size()));
    }
    pairs.push_back({parse_id(fields[0], file, line), parse_id(fields[1], file, line), line});
  });
  return pairs;
}

// First column of an id listing file ("id<TAB>name"), in file order.
std::vector<std::uint64_t> read_id_listing(const fs::path& file) {
  std::vector<std::uint64_t> ids;
  for_each_line(file, [&](const std::vector<std::string_view>& fields, std::size_t line) {
    ids.push_back(parse_id(fields[0], file, line));
  });
  return ids;
}

// Maps raw file ids onto a dense [0, size) range for one graph.
class IdMap {
 public:
  static IdMap from_listing(const std::vector<std::uint64_t>& ids, const fs::path& source) {
    IdMap map;
    map.explicit_ = true;
    map.source_ = source.string();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!map.table_.emplace(ids[i], static_cast<std::uint32_t>(i)).second) {
        throw ValidationError(source.string() + ": duplicate id " + std::to_string(ids[i]));
      }
    }
    map.size_ = ids.size();
    return map;
  }
  static IdMap offset(std::uint64_t offset, std::size_t size) {
    IdMap map;
    map.offset_ = offset;
    map.size_ = size;
    return map;
  }

  std::size_t size() const { return size_; }

  std::uint32_t map(std::uint64_t raw, const fs::path& file, std::size_t line,
                    const char* what) const {
    if (explicit_) {
      auto it = table_.find(raw);
      if (it == table_.end()) {
        throw ValidationError(location(file, line) + ": " + what + " id " + std::to_string(raw) +
                              " not listed in " + source_);
      }
      return it->second;
    }
    if (raw < offset_ || raw - offset_ >= size_) {
      throw ValidationError(location(file, line) + ": " + what + " id " + std::to_string(raw) +
                            " out of range [" + std::to_string(offset_) + ", " +
                            std::to_string(offset_ + size_) + ")");
    }
    return static_cast<std::uint32_t>(raw - offset_);
  }

 private:
  bool explicit_ = false;
  std::string source_;
  std::unordered_map<std::uint64_t, std::uint32_t> table_;
  std::uint64_t offset_ = 0;
  std::size_t size_ = 0;
};

std::optional<std::vector<std::uint64_t>> maybe_listing(const fs::path& dir,
                                                        const std::string& name) {
  if (name.empty()) return std::nullopt;
  const auto file = dir / name;
  if (!fs::exists(file)) return std::nullopt;
  return read_id_listing(file);
}

std::uint64_t max_or(std::uint64_t init, std::uint64_t v) { return std::max(init, v); }

// Builds the dense id map of one side (entities or relations) given the raw
// ids observed in that graph's files.
IdMap make_map(const std::optional<std::vector<std::uint64_t>>& listing, const fs::path& listing_file,
               IdSpace space, std::uint64_t global_offset, bool any_seen, std::uint64_t max_seen) {
  if (listing) return IdMap::from_listing(*listing, listing_file);
  const std::uint64_t offset = space == IdSpace::kGlobal ? global_offset : 0;
  if (!any_seen) return IdMap::offset(offset, 0);
  if (max_seen < offset) return IdMap::offset(offset, 0);  // every id will fail the bound check
  return IdMap::offset(offset, static_cast<std::size_t>(max_seen - offset + 1));
}

std::string describe(const EntityPair& p) {
  return "(" + std::to_string(p.source) + ", " + std::to_string(p.target) + ")";
}

}  // namespace

std::array<QuadColumn, 5> parse_column_order(const std::string& spec) {
  std::array<QuadColumn, 5> out{};
  std::stringstream ss(spec);
  std::string token;
  std::size_t i = 0;
  std::set<QuadColumn> seen;
  while (std::getline(ss, token, ',')) {
    if (i == 5) throw ContractViolation("column order has more than 5 entries: " + spec);
    QuadColumn c;
    if (token == "h" || token == "head") c = QuadColumn::kHead;
    else if (token == "r" || token == "rel") c = QuadColumn::kRel;
    else if (token == "t" || token == "tail") c = QuadColumn::kTail;
    else if (token == "tb" || token == "time_begin") c = QuadColumn::kTimeBegin;
    else if (token == "te" || token == "time_end") c = QuadColumn::kTimeEnd;
    else throw ContractViolation("unknown column name '" + token + "' in " + spec);
    if (!seen.insert(c).second) throw ContractViolation("duplicate column '" + token + "'");
    out[i++] = c;
  }
  if (i != 5) throw ContractViolation("column order needs exactly 5 entries: " + spec);
  return out;
}

TkgPair load_tkg_pair(const fs::path& dir, const FormatOptions& options) {
  if (!fs::is_directory(dir)) throw IngestionError("dataset directory not found: " + dir.string());

  const auto quads_file_1 = dir / options.quads_1;
  const auto quads_file_2 = dir / options.quads_2;
  const auto seeds_file = dir / options.seed_pairs;
  const auto refs_file = dir / options.ref_pairs;
  for (const auto& f : {quads_file_1, quads_file_2, seeds_file, refs_file}) {
    if (!fs::exists(f)) throw IngestionError("missing dataset file " + f.string());
  }

  const auto raw_q1 = read_quads(quads_file_1, options.columns);
  const auto raw_q2 = read_quads(quads_file_2, options.columns);
  const auto raw_seeds = read_pairs(seeds_file);
  const auto raw_refs = read_pairs(refs_file);
  std::vector<RawPair> raw_valid;
  const auto valid_file = dir / options.valid_pairs;
  if (!options.valid_pairs.empty() && fs::exists(valid_file)) raw_valid = read_pairs(valid_file);

  // Observed maxima, used only when no id listing exists.
  bool seen_e1 = false, seen_e2 = false, seen_r1 = false, seen_r2 = false;
  std::uint64_t max_e1 = 0, max_e2 = 0, max_r1 = 0, max_r2 = 0, max_t = 0;
  for (const auto& q : raw_q1) {
    seen_e1 = seen_r1 = true;
    max_e1 = max_or(max_e1, std::max(q.head, q.tail));
    max_r1 = max_or(max_r1, q.rel);
    max_t = max_or(max_t, std::max(q.time_begin, q.time_end));
  }
  for (const std::vector<RawPair>* list : {&raw_seeds, &raw_refs, &std::as_const(raw_valid)}) {
    for (const auto& p : *list) {
      seen_e1 = true;
      max_e1 = max_or(max_e1, p.source);
    }
  }

  const auto e1_listing = maybe_listing(dir, options.entity_ids_1);
  const auto e2_listing = maybe_listing(dir, options.entity_ids_2);
  const auto r1_listing = maybe_listing(dir, options.relation_ids_1);
  const auto r2_listing = maybe_listing(dir, options.relation_ids_2);
  const auto t_listing = maybe_listing(dir, options.time_ids);

  const IdMap e1 = make_map(e1_listing, dir / options.entity_ids_1, options.id_space, 0, seen_e1, max_e1);
  const IdMap r1 = make_map(r1_listing, dir / options.relation_ids_1, options.id_space, 0, seen_r1, max_r1);

  for (const auto& q : raw_q2) {
    seen_e2 = seen_r2 = true;
    max_e2 = max_or(max_e2, std::max(q.head, q.tail));
    max_r2 = max_or(max_r2, q.rel);
    max_t = max_or(max_t, std::max(q.time_begin, q.time_end));
  }
  for (const std::vector<RawPair>* list : {&raw_seeds, &raw_refs, &std::as_const(raw_valid)}) {
    for (const auto& p : *list) {
      seen_e2 = true;
      max_e2 = max_or(max_e2, p.target);
    }
  }
  const IdMap e2 = make_map(e2_listing, dir / options.entity_ids_2, options.id_space, e1.size(),
                            seen_e2, max_e2);
  const IdMap r2 = make_map(r2_listing, dir / options.relation_ids_2, options.id_space, r1.size(),
                            seen_r2, max_r2);

  TkgPair pair;
  if (t_listing) {
    std::uint64_t listed_max = 0;
    for (auto id : *t_listing) listed_max = std::max(listed_max, id);
    pair.num_times = t_listing->empty() ? 1 : static_cast<std::size_t>(listed_max + 1);
  } else {
    pair.num_times = static_cast<std::size_t>(max_t + 1);
  }

  auto convert_quads = [&](const std::vector<RawQuad>& raw, const IdMap& ents, const IdMap& rels,
                           const fs::path& file, Tkg& out) {
    out.num_entities = ents.size();
    out.num_relations = rels.size();
    out.quadruples.reserve(raw.size());
    for (const auto& q : raw) {
      for (auto tid : {q.time_begin, q.time_end}) {
        if (tid >= pair.num_times) {
          throw ValidationError(location(file, q.line) + ": time id " + std::to_string(tid) +
                                " out of range [0, " + std::to_string(pair.num_times) + ")");
        }
      }
      out.quadruples.push_back({ents.map(q.head, file, q.line, "entity"),
                                rels.map(q.rel, file, q.line, "relation"),
                                ents.map(q.tail, file, q.line, "entity"),
                                static_cast<TimeId>(q.time_begin), static_cast<TimeId>(q.time_end)});
    }
  };
  convert_quads(raw_q1, e1, r1, quads_file_1, pair.g1);
  convert_quads(raw_q2, e2, r2, quads_file_2, pair.g2);

  auto convert_pairs = [&](const std::vector<RawPair>& raw, const fs::path& file) {
    std::vector<EntityPair> out;
    out.reserve(raw.size());
    for (const auto& p : raw) {
      out.push_back({e1.map(p.source, file, p.line, "G1 entity"),
                     e2.map(p.target, file, p.line, "G2 entity")});
    }
    return out;
  };
  pair.seeds = convert_pairs(raw_seeds, seeds_file);
  pair.refs = convert_pairs(raw_refs, refs_file);
  auto valid = convert_pairs(raw_valid, valid_file);
  if (options.keep_validation_separate) {
    pair.valid = std::move(valid);
  } else {
    pair.refs.insert(pair.refs.end(), valid.begin(), valid.end());
  }

  validate_ids(pair);
  return pair;
}

void write_tkg_pair(const TkgPair& pair, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw IngestionError("cannot write dataset file " + (dir / name).string());
    return out;
  };
  auto write_listing = [&](const std::string& name, std::size_t n, char prefix) {
    auto out = open(name);
    for (std::size_t i = 0; i < n; ++i) out << i << '\t' << prefix << i << '\n';
  };
  auto write_quads = [&](const std::string& name, const Tkg& g) {
    auto out = open(name);
    for (const auto& q : g.quadruples) {
      out << q.head << '\t' << q.rel << '\t' << q.tail << '\t' << q.time_begin << '\t'
          << q.time_end << '\n';
    }
  };
  auto write_pairs = [&](const std::string& name, const std::vector<EntityPair>& pairs) {
    auto out = open(name);
    for (const auto& p : pairs) out << p.source << '\t' << p.target << '\n';
  };
  const FormatOptions names;
  write_listing(names.entity_ids_1, pair.g1.num_entities, 'e');
  write_listing(names.entity_ids_2, pair.g2.num_entities, 'e');
  write_listing(names.relation_ids_1, pair.g1.num_relations, 'r');
  write_listing(names.relation_ids_2, pair.g2.num_relations, 'r');
  write_listing(names.time_ids, pair.num_times, 't');
  write_quads(names.quads_1, pair.g1);
  write_quads(names.quads_2, pair.g2);
  write_pairs(names.seed_pairs, pair.seeds);
  write_pairs(names.ref_pairs, pair.refs);
  if (!pair.valid.empty()) write_pairs(names.valid_pairs, pair.valid);
}

void validate_ids(const TkgPair& pair) {
  auto check_graph = [&](const Tkg& g, const char* name) {
    for (std::size_t i = 0; i < g.quadruples.size(); ++i) {
      const auto& q = g.quadruples[i];
      if (q.head >= g.num_entities || q.tail >= g.num_entities || q.rel >= g.num_relations ||
          q.time_begin >= pair.num_times || q.time_end >= pair.num_times) {
        throw ValidationError(std::string(name) + " quadruple #" + std::to_string(i) +
                              " has an out-of-range id");
      }
    }
  };
  check_graph(pair.g1, "G1");
  check_graph(pair.g2, "G2");
  for (const auto* list : {&pair.seeds, &pair.refs, &pair.valid}) {
    for (const auto& p : *list) {
      if (p.source >= pair.g1.num_entities || p.target >= pair.g2.num_entities) {
        throw ValidationError("pair " + describe(p) + " has an out-of-range entity id");
      }
    }
  }
}

const TkgPair& train_test_split_check(const TkgPair& pair) {
  std::vector<std::string> problems;
  auto check_one_to_one = [&](const std::vector<EntityPair>& list, const char* name) {
    std::unordered_map<EntityId, EntityPair> by_source, by_target;
    for (const auto& p : list) {
      if (auto [it, fresh] = by_source.emplace(p.source, p); !fresh) {
        problems.push_back(std::string(name) + ": G1 entity " + std::to_string(p.source) +
                           " in " + describe(it->second) + " and " + describe(p));
      }
      if (auto [it, fresh] = by_target.emplace(p.target, p); !fresh) {
        problems.push_back(std::string(name) + ": G2 entity " + std::to_string(p.target) +
                           " in " + describe(it->second) + " and " + describe(p));
      }
    }
  };
  check_one_to_one(pair.seeds, "seeds");
  check_one_to_one(pair.refs, "refs");

  std::unordered_map<EntityId, EntityPair> seed_source, seed_target;
  for (const auto& p : pair.seeds) {
    seed_source.emplace(p.source, p);
    seed_target.emplace(p.target, p);
  }
  for (const auto& p : pair.refs) {
    if (auto it = seed_source.find(p.source); it != seed_source.end()) {
      problems.push_back("G1 entity " + std::to_string(p.source) + " in seed " +
                         describe(it->second) + " and ref " + describe(p));
    }
    if (auto it = seed_target.find(p.target); it != seed_target.end()) {
      problems.push_back("G2 entity " + std::to_string(p.target) + " in seed " +
                         describe(it->second) + " and ref " + describe(p));
    }
  }
  if (!problems.empty()) {
    std::string message = "train/test split check failed:";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) message += "\n  " + problems[i];
    if (problems.size() > shown) {
      message += "\n  ... and " + std::to_string(problems.size() - shown) + " more";
    }
    throw ValidationError(message);
  }
  return pair;
}

void Config::validate() const {
  auto fail = [](const std::string& what) { throw ContractViolation("invalid config: " + what); };
  if (dim < 1) fail("dim must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (!(beta >= 0.0 && beta <= 1.0)) fail("beta must lie in [0, 1]");
  if (rounds < 1) fail("rounds must be >= 1");
  if (topk < 1) fail("topk must be >= 1");
  if (sinkhorn_iters < 1) fail("sinkhorn iterations must be >= 1");
  if (!(temperature > 0.0)) fail("temperature must be > 0");
  if (!(threshold > 0.0 && threshold <= 1.0)) fail("threshold must lie in (0, 1]");
  if (max_semi_iters < 1) fail("max semi-supervised iterations must be >= 1");
}

const char* to_string(Mode mode) { return mode == Mode::kSupervised ? "sup" : "semi"; }
const char* to_string(Direction direction) {
  return direction == Direction::kOneWay ? "one-way" : "both";
}
const char* to_string(AcceptanceScores scores) {
  return scores == AcceptanceScores::kPostSinkhorn ? "post-sinkhorn" : "pre-sinkhorn";
}

}  // namespace chronalign
