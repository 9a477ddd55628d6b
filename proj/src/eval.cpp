// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/eval.hpp"

#include <algorithm>
#include <cmath>

#include "lastde/error.hpp"

namespace lastde {
namespace {

void check_scores(std::span<const double> scores, const char* which) {
  if (scores.empty()) {
    throw Error(Errc::kEmptyClass, std::string("no ") + which + " scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(Errc::kInvalidInput, std::string("non-finite ") + which + " score");
    }
  }
}

std::vector<double> candidate_thresholds(const ScoredDataset& d) {
  std::vector<double> pooled(d.human_scores);
  pooled.insert(pooled.end(), d.machine_scores.begin(), d.machine_scores.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<double> out;
  out.reserve(pooled.size() + 1);
  out.push_back(pooled.front() - 1.0);
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    out.push_back(pooled[i] + (pooled[i + 1] - pooled[i]) / 2.0);
  }
  out.push_back(pooled.back() + 1.0);
  return out;
}

double rate_above(const std::vector<double>& sorted, double threshold) {
  const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold);
  return static_cast<double>(above) / static_cast<double>(sorted.size());
}

}  // namespace

void ScoredDataset::validate() const {
  check_scores(human_scores, "human");
  check_scores(machine_scores, "machine");
}

double auroc(std::span<const double> human, std::span<const double> machine) {
  check_scores(human, "human");
  check_scores(machine, "machine");

  // Rank-sum form: midranks of the pooled scores, machine ranks summed.
  struct Item {
    double score;
    bool machine;
  };
  std::vector<Item> pooled;
  pooled.reserve(human.size() + machine.size());
  for (double s : human) pooled.push_back({s, false});
  for (double s : machine) pooled.push_back({s, true});
  std::sort(pooled.begin(), pooled.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });

  double machine_rank_sum = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    std::size_t machines = 0;
    while (j < pooled.size() && pooled[j].score == pooled[i].score) {
      machines += pooled[j].machine ? 1 : 0;
      ++j;
    }
    // ranks i+1..j share the midrank (i+1+j)/2
    machine_rank_sum += static_cast<double>(machines) * static_cast<double>(i + 1 + j) / 2.0;
    i = j;
  }
  const auto n_m = static_cast<double>(machine.size());
  const auto n_h = static_cast<double>(human.size());
  const double u = machine_rank_sum - n_m * (n_m + 1.0) / 2.0;
  return u / (n_m * n_h);
}

double auroc(const ScoredDataset& dataset) {
  return auroc(dataset.human_scores, dataset.machine_scores);
}

std::vector<RocPoint> roc_points(const ScoredDataset& dataset) {
  dataset.validate();
  std::vector<double> human(dataset.human_scores);
  std::vector<double> machine(dataset.machine_scores);
  std::sort(human.begin(), human.end());
  std::sort(machine.begin(), machine.end());

  auto thresholds = candidate_thresholds(dataset);
  std::vector<RocPoint> points;
  points.reserve(thresholds.size());
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    points.push_back({*it, rate_above(human, *it), rate_above(machine, *it)});
  }
  return points;
}

EvalReport calibrate_threshold(const ScoredDataset& dataset, ThresholdObjective objective) {
  dataset.validate();
  if (objective.kind == ThresholdObjective::Kind::kFprCap &&
      !(objective.alpha >= 0.0 && objective.alpha <= 1.0)) {
    throw Error(Errc::kInvalidInput, "FPR cap must lie in [0, 1]");
  }

  EvalReport report;
  report.detector_name = dataset.detector_name;
  report.dataset_name = dataset.dataset_name;
  report.source_model_name = dataset.source_model_name;
  report.auroc = auroc(dataset);
  report.n_human = dataset.human_scores.size();
  report.n_machine = dataset.machine_scores.size();

  std::vector<double> human(dataset.human_scores);
  std::vector<double> machine(dataset.machine_scores);
  std::sort(human.begin(), human.end());
  std::sort(machine.begin(), machine.end());

  // Candidates ascend, so keeping the first best (strict improvement only)
  // resolves ties toward the lower threshold.
  bool found = false;
  double best = 0.0;
  for (double t : candidate_thresholds(dataset)) {
    const double fpr = rate_above(human, t);
    const double tpr = rate_above(machine, t);
    if (objective.kind == ThresholdObjective::Kind::kYouden) {
      const double j = tpr - fpr;
      if (!found || j > best) {
        found = true;
        best = j;
        report.threshold = t;
        report.tpr = tpr;
        report.fpr = fpr;
      }
    } else if (fpr <= objective.alpha) {
      report.threshold = t;
      report.tpr = tpr;
      report.fpr = fpr;
      break;
    }
  }
  return report;
}

}  // namespace lastde
