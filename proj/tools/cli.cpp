// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lastde/commands.hpp"

namespace lastde::cli {
namespace {

struct Flags {
  std::string detector = "lastde";
  std::vector<std::string> detectors;
  std::optional<int> s;
  std::optional<double> k;
  std::optional<int> tau;
  std::string agg = "std";
  int samples = 100;
  std::uint64_t seed = 0;
  bool strict = false;
  bool no_clamp = false;
  unsigned threads = 0;
  std::string objective = "youden";
  std::string output;
};

void add_scoring_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--s", f.s, "Sliding window size")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--k", f.k, "Bin multiplier: bins = round(k * n)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tau", f.tau, "Number of scales")->check(CLI::Range(1, 1 << 20));
  cmd->add_option("--agg", f.agg, "Aggregator: std, expstd, range, exprange, 2norm");
  cmd->add_option("--samples", f.samples, "Lastde++ sample count")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--seed", f.seed, "Lastde++ sampling seed");
  cmd->add_flag("--strict", f.strict, "Reject degenerate aggregates instead of flooring");
  cmd->add_flag("--no-clamp", f.no_clamp, "Reject infeasible scale counts instead of clamping");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
}

ScoreOptions to_options(const Flags& f, const std::string& detector) {
  ScoreOptions o;
  const auto det = parse_detector(detector);
  if (!det) throw Error(Errc::kUnknownDetector, "unknown detector '" + detector + "'");
  o.detector = *det;
  const auto agg = parse_aggregator(f.agg);
  if (!agg) throw Error(Errc::kInvalidInput, "unknown aggregator '" + f.agg + "'");
  o.agg = *agg;
  o.window_size = f.s;
  o.bin_multiplier = f.k;
  o.scale_count = f.tau;
  o.samples = f.samples;
  o.seed = f.seed;
  o.strict = f.strict;
  o.clamp_scales = !f.no_clamp;
  o.threads = f.threads;
  return o;
}

ThresholdObjective parse_objective(const std::string& text) {
  if (text == "youden") return ThresholdObjective::youden();
  constexpr std::string_view prefix = "fpr:";
  if (text.rfind(prefix, 0) == 0) {
    return ThresholdObjective::fpr_cap(std::stod(text.substr(prefix.size())));
  }
  throw Error(Errc::kInvalidInput, "objective must be 'youden' or 'fpr:<alpha>'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lastde / Lastde++ detection of machine-generated text from token log-probabilities"};
  app.set_config("--config", "", "TOML/INI file with default flag values");
  app.require_subcommand(1);

  Flags f;
  std::string input;
  std::vector<std::string> inputs;
  std::string record_id;

  auto* score = app.add_subcommand("score", "Score every record in a file");
  score->add_option("input", input, "Record file")->required();
  score->add_option("--detector", f.detector,
                    "likelihood, logrank, entropy, lrr, lastde, lastde_pp");
  score->add_option("-o,--output", f.output, "Write rows here instead of stdout");
  add_scoring_flags(score, f);

  auto* eval = app.add_subcommand("eval", "AUROC and threshold per detector");
  eval->add_option("inputs", inputs, "Record files (one dataset each)")->required();
  eval->add_option("--detector", f.detectors, "Detector(s) to evaluate")->delimiter(',');
  eval->add_option("--objective", f.objective, "youden or fpr:<alpha>");
  eval->add_option("-o,--output", f.output, "Write rows here instead of stdout");
  add_scoring_flags(eval, f);

  auto* inspect = app.add_subcommand("inspect", "Per-scale diversity entropy of one record");
  inspect->add_option("input", input, "Record file")->required();
  inspect->add_option("--id", record_id, "Record id")->required();
  inspect->add_option("--detector", f.detector, "Profile to use: lastde or lastde_pp");
  add_scoring_flags(inspect, f);

  auto* validate = app.add_subcommand("validate", "Check a record file against the schema");
  validate->add_option("input", input, "Record file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kFatal);
  }

  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!f.output.empty()) {
      file.open(f.output, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(Errc::kInvalidInput, "cannot open output " + f.output);
      sink = &file;
    }

    ExitCode code = ExitCode::kFatal;
    if (*score) {
      code = cmd_score(input, to_options(f, f.detector), *sink, err);
    } else if (*eval) {
      EvalOptions eo;
      eo.score = to_options(f, "lastde");
      eo.objective = parse_objective(f.objective);
      if (!f.detectors.empty()) {
        eo.detectors.clear();
        for (const auto& name : f.detectors) eo.detectors.push_back(to_options(f, name).detector);
      }
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      code = cmd_eval(paths, eo, *sink, err);
    } else if (*inspect) {
      code = cmd_inspect(input, record_id, to_options(f, f.detector), *sink, err);
    } else if (*validate) {
      code = cmd_validate(input, *sink, err);
    }
    return static_cast<int>(code);
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kFatal);
  }
}

}  // namespace lastde::cli
