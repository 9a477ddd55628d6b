// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

// Batch commands behind the command-line tool. Each writes tab-separated
// rows with a header line to `out` and diagnostics to `err`, and returns an
// ExitCode.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lastde/detectors.hpp"
#include "lastde/eval.hpp"
#include "lastde/text_record.hpp"

namespace lastde {

enum class ExitCode : int { kClean = 0, kPartial = 1, kFatal = 2 };

struct ScoreOptions {
  DetectorKind detector = DetectorKind::kLastde;
  std::optional<int> window_size;
  std::optional<double> bin_multiplier;
  std::optional<int> scale_count;
  bool clamp_scales = true;
  Aggregator agg = Aggregator::kStd;
  int samples = 100;
  std::uint64_t seed = 0;
  bool strict = false;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Detector profile with any explicit overrides applied.
  MdeConfig mde_config() const;
  LastdePPConfig lastde_pp_config() const;
};

struct ScoreRow {
  std::string id;
  std::string detector;
  std::optional<double> score;
  std::string error;  // set when score is empty

  bool ok() const noexcept { return score.has_value(); }
};

ScoreRow score_record(const TextRecord& record, const ScoreOptions& options);

/// Scores records concurrently; rows come back in input order.
std::vector<ScoreRow> score_records(std::span<const TextRecord> records,
                                    const ScoreOptions& options);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

ExitCode cmd_score(const std::filesystem::path& input, const ScoreOptions& options,
                   std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::vector<DetectorKind> detectors{DetectorKind::kLastde};
  ScoreOptions score;
  ThresholdObjective objective = ThresholdObjective::youden();
};

/// One report per (input, detector). With several inputs a per-detector
/// "average" row carries the mean AUROC.
ExitCode cmd_eval(std::span<const std::filesystem::path> inputs, const EvalOptions& options,
                  std::ostream& out, std::ostream& err,
                  std::vector<EvalReport>* reports = nullptr);

ExitCode cmd_inspect(const std::filesystem::path& input, const std::string& record_id,
                     const ScoreOptions& options, std::ostream& out, std::ostream& err);

ExitCode cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err);

}  // namespace lastde
