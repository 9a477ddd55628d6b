// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "lastde/mde.hpp"
#include "lastde/tps.hpp"

namespace lastde {

// All detector scores share one orientation: a higher value means the text
// is more likely machine-generated.

/// Smallest aggregate accepted as a Lastde denominator.
inline constexpr double kAggregateFloor = 1e-12;

enum class Aggregator { kStd, kExpStd, kRange, kExpRange, kTwoNorm };

std::string_view aggregator_name(Aggregator agg) noexcept;
std::optional<Aggregator> parse_aggregator(std::string_view name);

/// Population standard deviation, range, their exponentials, or the
/// Euclidean norm of `values`.
double aggregate(const Eigen::Ref<const Eigen::VectorXd>& values, Aggregator agg);

enum class DetectorKind { kLikelihood, kLogRank, kEntropy, kLrr, kLastde, kLastdePP };

std::string_view detector_name(DetectorKind kind) noexcept;
std::optional<DetectorKind> parse_detector(std::string_view name);

struct DetectorScore {
  std::string detector_name;
  double value = 0.0;
};

/// Lastde profile: s=3, eps=10n, tau'=5.
MdeConfig lastde_profile();
/// Lastde++ profile: s=4, eps=8n, tau'=15.
MdeConfig lastde_pp_profile();

struct LastdePPConfig {
  MdeConfig mde = lastde_pp_profile();
  int sample_count = 100;
  std::uint64_t seed = 0;
  double sigma_floor = 1e-8;

  void validate() const;
};

double log_likelihood(const Tps& tps);

/// Negated mean log rank. Ranks are 1-based.
double log_rank(std::span<const std::int64_t> ranks);

/// Negated mean per-token entropy.
double mean_entropy(std::span<const double> entropies);

/// -mean(log p) / mean(log rank). Throws kDegenerateRank when the mean log
/// rank does not exceed `denominator_floor` (all tokens rank 1).
double lrr(const Tps& tps, std::span<const std::int64_t> ranks,
           double denominator_floor = 1e-8);

struct LastdeResult {
  double score = 0.0;
  double log_likelihood = 0.0;
  double aggregate = 0.0;
  bool floored = false;
  MdeProfile profile;
};

/// Mean log-likelihood divided by the aggregated MDE. Aggregates below
/// kAggregateFloor are replaced by the floor, or rejected with
/// kDegenerateAggregate when `strict` is set.
LastdeResult lastde_detailed(const Tps& tps, const MdeConfig& cfg, Aggregator agg,
                             bool strict = false);

double lastde(const Tps& tps, const MdeConfig& cfg, Aggregator agg = Aggregator::kStd,
              bool strict = false);

/// Standardizes `candidate` against the population mean and standard
/// deviation of `sampled_scores`.
double lastde_pp(double candidate, std::span<const double> sampled_scores,
                 double sigma_floor = 1e-8);

}  // namespace lastde
