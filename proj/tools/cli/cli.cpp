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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "chronalign/error.hpp"
#include "chronalign/synthetic.hpp"

namespace chronalign::cli {
namespace {

double parse_number(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size() || !std::isfinite(value)) {
    throw ValidationError("not a number: '" + token + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::size_t as_count(const std::string& name, double value) {
  if (value < 0.0 || value != std::floor(value)) {
    throw ValidationError("sweep value for " + name + " must be a non-negative integer, got " +
                          std::to_string(value));
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

std::vector<double> expand_values(const std::string& list) {
  const auto tokens = split(list, ',');
  std::vector<double> values;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] != "...") {
      values.push_back(parse_number(tokens[i]));
      continue;
    }
    if (values.size() < 2 || i + 1 >= tokens.size() || tokens[i + 1] == "...") {
      throw ValidationError("'...' needs two values before it and one after: " + list);
    }
    const double first = values[values.size() - 2];
    const double step = values.back() - first;
    const double last = parse_number(tokens[i + 1]);
    if (step == 0.0 || (last - values.back()) / step < 0.0) {
      throw ValidationError("'...' cannot step from " + tokens[i - 1] + " to " + tokens[i + 1]);
    }
    // Index-based steps avoid accumulating 0.1 + 0.1 + ... drift.
    const double span = (last - first) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
    for (std::size_t n = 2; n <= count; ++n) {
      double v = first + static_cast<double>(n) * step;
      v = std::round(v * 1e12) / 1e12;
      values.push_back(v);
    }
    if (std::abs(values.back() - last) > 1e-9 * std::max(1.0, std::abs(last))) values.push_back(last);
    ++i;  // the end value was consumed
  }
  if (values.empty()) throw ValidationError("empty value list");
  return values;
}

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("sweep must look like name=v1,v2,...; got '" + text + "'");
  }
  Sweep sweep{text.substr(0, eq), expand_values(text.substr(eq + 1))};
  const bool known = std::any_of(std::begin(kSweepParameters), std::end(kSweepParameters),
                                 [&](const char* p) { return sweep.parameter == p; });
  if (!known) {
    std::string names;
    for (const char* p : kSweepParameters) names += std::string(names.empty() ? "" : ", ") + p;
    throw ValidationError("unknown sweep parameter '" + sweep.parameter + "' (expected one of " + names + ")");
  }
  for (double v : sweep.values) {
    Config probe;
    apply_parameter(probe, sweep.parameter, v);
    probe.validate();
  }
  return sweep;
}

void apply_parameter(Config& config, const std::string& name, double value) {
  if (name == "alpha") {
    config.alpha = value;
  } else if (name == "beta") {
    config.beta = value;
  } else if (name == "d") {
    config.dim = as_count(name, value);
  } else if (name == "k") {
    config.topk = as_count(name, value);
  } else if (name == "m") {
    config.sinkhorn_iters = as_count(name, value);
  } else if (name == "t") {
    config.temperature = value;
  } else if (name == "threshold") {
    config.threshold = value;
  } else {
    throw ValidationError("unknown sweep parameter '" + name + "'");
  }
}

std::vector<RunRecord> execute(const RunSpec& spec, const TkgPair& pair, std::ostream& log) {
  IterationObserver observer;
  if (!spec.quiet) observer = [&](const IterationLog& l) { log << format_iteration_log(l) << '\n'; };
  std::vector<RunRecord> runs;
  if (!spec.sweep) {
    runs.push_back({std::nullopt, 0.0, run_pipeline(pair, spec.config, observer)});
    return runs;
  }
  for (double v : spec.sweep->values) {
    Config config = spec.config;
    apply_parameter(config, spec.sweep->parameter, v);
    if (!spec.quiet) log << spec.sweep->parameter << " = " << v << '\n';
    runs.push_back({spec.sweep->parameter, v, run_pipeline(pair, config, observer)});
  }
  return runs;
}

namespace {

using Clock = std::chrono::steady_clock;

void add_run_options(CLI::App& run, RunSpec& spec, std::string& mode, std::string& direction,
                     std::string& accept_on, std::string& id_space, std::string& columns,
                     std::string& sweep, bool& no_one_to_one, bool& single_point,
                     bool& raw_retrieval) {
  Config& c = spec.config;
  run.add_option("--data", spec.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  run.add_option("--mode", mode, "sup or semi")->check(CLI::IsMember({"sup", "semi"}))->capture_default_str();
  run.add_option("--dim", c.dim, "Label dimension")->capture_default_str();
  run.add_option("--alpha", c.alpha, "Weight of the temporal aspect")->capture_default_str();
  run.add_option("--beta", c.beta, "Weight of time similarity")->capture_default_str();
  run.add_option("--rounds", c.rounds, "Propagation rounds")->capture_default_str();
  run.add_option("--topk", c.topk, "Candidates per source entity")->capture_default_str();
  run.add_option("--sinkhorn-iters", c.sinkhorn_iters, "Sinkhorn iterations")->capture_default_str();
  run.add_option("--temperature", c.temperature, "Sinkhorn temperature")->capture_default_str();
  run.add_option("--threshold", c.threshold, "Pseudo-seed acceptance bound")->capture_default_str();
  run.add_option("--max-iters", c.max_semi_iters, "Semi-supervised passes")->capture_default_str();
  run.add_flag("--no-tlp", c.disable_tlp, "Skip temporal-aspect propagation");
  run.add_flag("--no-tc", c.disable_tc, "Skip time constraints");
  run.add_flag("--no-sinkhorn", c.disable_so, "Skip Sinkhorn");
  run.add_option("--direction", direction, "one-way or both")
      ->check(CLI::IsMember({"one-way", "both"}))
      ->capture_default_str();
  run.add_option("--seed", c.rng_seed, "Label RNG seed")->capture_default_str();
  run.add_option("--threads", c.threads, "Worker threads, 0 = all cores")->capture_default_str();
  run.add_option("--accept-on", accept_on, "Scores the threshold applies to")
      ->check(CLI::IsMember({"post-sinkhorn", "pre-sinkhorn"}))
      ->capture_default_str();
  run.add_flag("--no-one-to-one", no_one_to_one, "Keep each source's best target without de-conflicting");
  run.add_flag("--binarize", c.binarize_adjacency, "Binary adjacency weights");
  run.add_flag("--single-point-insert", single_point, "Point events enter time bags once");
  run.add_flag("--raw-retrieval", raw_retrieval, "Inner products of unnormalized fused labels");
  run.add_option("--out", spec.out, "Write the JSON report here");
  run.add_option("--sweep", sweep, "name=v1,v2,... over alpha, beta, d, k, m, t, threshold");
  run.add_option("--dump-candidates", spec.dump_candidates, "Final candidate table (tsv)");
  run.add_option("--dump-raw-candidates", spec.dump_raw_candidates, "Candidate table before Sinkhorn (tsv)");
  run.add_option("--id-space", id_space, "global or local entity ids")
      ->check(CLI::IsMember({"global", "local"}))
      ->capture_default_str();
  run.add_option("--columns", columns, "Quadruple column order, e.g. h,r,t,tb,te");
  run.add_flag("--keep-valid", spec.format.keep_validation_separate,
               "Do not fold valid_pairs into the reference set");
  run.add_flag("-q,--quiet", spec.quiet, "No per-iteration log on stderr");
}

int run_command(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const TkgPair pair = load_tkg_pair(spec.data, spec.format);
  const double load_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  std::vector<RunRecord> runs = execute(spec, pair, err);
  for (auto& r : runs) r.output.metrics.wall_clock_seconds += load_seconds;

  if (spec.dump_candidates) write_candidate_table(runs.back().output.candidates, *spec.dump_candidates);
  if (spec.dump_raw_candidates) {
    write_candidate_table(runs.back().output.raw_candidates, *spec.dump_raw_candidates);
  }
  if (spec.out) write_json_atomic(*spec.out, report_to_json(spec, load_seconds, runs));

  if (spec.sweep) {
    out << sweep_table(spec.sweep->parameter, runs);
  } else {
    const PipelineOutput& o = runs.front().output;
    out << "mode = " << to_string(spec.config.mode) << '\n'
        << to_key_value(o.metrics) << "load_seconds = " << load_seconds << '\n'
        << "iterations = " << o.state.iteration << '\n'
        << "accepted_pairs = " << o.state.accepted.size() << '\n';
  }
  return 0;
}

int generate_command(const SyntheticSpec& synth, const std::filesystem::path& dir, std::ostream& out) {
  const TkgPair pair = make_synthetic_pair(synth);
  write_tkg_pair(pair, dir);
  out << "wrote " << pair.g1.quadruples.size() << " + " << pair.g2.quadruples.size() << " quadruples, "
      << pair.seeds.size() << " seeds, " << pair.refs.size() << " reference pairs to " << dir.string()
      << "\nread it with: chronalign run --data " << dir.string() << " --id-space local\n";
  return 0;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entity alignment between two temporal knowledge graphs.", "chronalign"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "chronalign 0.3.0");

  RunSpec spec;
  std::string mode = "semi", direction = "one-way", accept_on = "post-sinkhorn", id_space = "global";
  std::string columns, sweep;
  bool no_one_to_one = false, single_point = false, raw_retrieval = false;
  CLI::App* run = app.add_subcommand("run", "Align a dataset and report metrics");
  add_run_options(*run, spec, mode, direction, accept_on, id_space, columns, sweep, no_one_to_one,
                  single_point, raw_retrieval);

  SyntheticSpec synth;
  std::filesystem::path gen_dir;
  CLI::App* gen = app.add_subcommand("generate", "Write a synthetic aligned pair");
  gen->add_option("--out", gen_dir, "Output directory")->required();
  gen->add_option("--entities", synth.entities)->capture_default_str();
  gen->add_option("--relations", synth.relations)->capture_default_str();
  gen->add_option("--timestamps", synth.timestamps)->capture_default_str();
  gen->add_option("--quadruples", synth.quadruples)->capture_default_str();
  gen->add_option("--seed-fraction", synth.seed_fraction)->capture_default_str();
  gen->add_option("--interval-fraction", synth.interval_fraction)->capture_default_str();
  gen->add_option("--untimed-fraction", synth.untimed_fraction)->capture_default_str();
  gen->add_option("--drop", synth.drop_fraction, "Chance a G2 fact is dropped")->capture_default_str();
  gen->add_option("--time-noise", synth.time_noise, "Chance a G2 fact is re-stamped")->capture_default_str();
  gen->add_option("--seed", synth.rng_seed)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      Config& c = spec.config;
      c.mode = mode == "sup" ? Mode::kSupervised : Mode::kSemiSupervised;
      c.direction = direction == "both" ? Direction::kBoth : Direction::kOneWay;
      c.accept_on = accept_on == "pre-sinkhorn" ? AcceptanceScores::kPreSinkhorn : AcceptanceScores::kPostSinkhorn;
      c.one_to_one = !no_one_to_one;
      c.point_event_double_insert = !single_point;
      c.normalize_retrieval = !raw_retrieval;
      spec.format.id_space = id_space == "local" ? IdSpace::kLocal : IdSpace::kGlobal;
      if (!columns.empty()) spec.format.columns = parse_column_order(columns);
      if (!sweep.empty()) spec.sweep = parse_sweep(sweep);
      c.validate();
    }
  } catch (const chronalign::Error& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    if (run->parsed()) return run_command(spec, out, err);
    return generate_command(synth, gen_dir, out);
  } catch (const chronalign::Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace chronalign::cli
