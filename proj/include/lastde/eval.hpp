// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <span>
#include <string>
#include <vector>

namespace lastde {

/// Scores of one detector on one dataset, split by true label. Machine text
/// is the positive class; higher scores mean "more likely machine".
struct ScoredDataset {
  std::vector<double> human_scores;
  std::vector<double> machine_scores;
  std::string detector_name;
  std::string dataset_name;
  std::string source_model_name;

  void validate() const;
};

/// Probability that a machine score exceeds a human score, ties counted as
/// one half (the Mann-Whitney U statistic divided by the pair count).
double auroc(std::span<const double> human, std::span<const double> machine);
double auroc(const ScoredDataset& dataset);

struct ThresholdObjective {
  enum class Kind { kYouden, kFprCap };
  Kind kind = Kind::kYouden;
  double alpha = 0.0;  // FPR cap, used with kFprCap

  static ThresholdObjective youden() { return {}; }
  static ThresholdObjective fpr_cap(double alpha) { return {Kind::kFprCap, alpha}; }
};

struct EvalReport {
  std::string detector_name;
  std::string dataset_name;
  std::string source_model_name;
  double auroc = 0.5;
  double threshold = 0.0;  // predict machine when score > threshold
  double tpr = 0.0;
  double fpr = 0.0;
  std::size_t n_human = 0;
  std::size_t n_machine = 0;
};

/// Picks a decision threshold among the midpoints of adjacent distinct
/// scores plus one point below and one above all scores. Youden maximizes
/// TPR - FPR; the FPR cap takes the lowest threshold whose FPR <= alpha.
/// Ties go to the lower threshold.
EvalReport calibrate_threshold(const ScoredDataset& dataset, ThresholdObjective objective);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

/// Operating points for every candidate threshold, highest threshold first.
std::vector<RocPoint> roc_points(const ScoredDataset& dataset);

}  // namespace lastde
