// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/detectors.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace lastde {
namespace {

constexpr std::array<std::pair<Aggregator, std::string_view>, 5> kAggregators{{
    {Aggregator::kStd, "std"},
    {Aggregator::kExpStd, "expstd"},
    {Aggregator::kRange, "range"},
    {Aggregator::kExpRange, "exprange"},
    {Aggregator::kTwoNorm, "2norm"},
}};

constexpr std::array<std::pair<DetectorKind, std::string_view>, 6> kDetectors{{
    {DetectorKind::kLikelihood, "likelihood"},
    {DetectorKind::kLogRank, "logrank"},
    {DetectorKind::kEntropy, "entropy"},
    {DetectorKind::kLrr, "lrr"},
    {DetectorKind::kLastde, "lastde"},
    {DetectorKind::kLastdePP, "lastde_pp"},
}};

double population_std(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().mean());
}

double mean_log_rank(std::span<const std::int64_t> ranks) {
  if (ranks.empty()) throw Error(Errc::kInvalidInput, "rank sequence is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1) {
      throw Error(Errc::kInvalidInput,
                  "rank at index " + std::to_string(i) + " is below 1");
    }
    sum += std::log(static_cast<double>(ranks[i]));
  }
  return sum / static_cast<double>(ranks.size());
}

}  // namespace

std::string_view aggregator_name(Aggregator agg) noexcept {
  for (const auto& [a, name] : kAggregators) {
    if (a == agg) return name;
  }
  return "?";
}

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  for (const auto& [a, n] : kAggregators) {
    if (n == name) return a;
  }
  return std::nullopt;
}

std::string_view detector_name(DetectorKind kind) noexcept {
  for (const auto& [k, name] : kDetectors) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<DetectorKind> parse_detector(std::string_view name) {
  for (const auto& [k, n] : kDetectors) {
    if (n == name) return k;
  }
  return std::nullopt;
}

double aggregate(const Eigen::Ref<const Eigen::VectorXd>& values, Aggregator agg) {
  if (values.size() == 0) {
    throw Error(Errc::kInsufficientData, "cannot aggregate an empty sequence");
  }
  switch (agg) {
    case Aggregator::kStd: return population_std(values);
    case Aggregator::kExpStd: return std::exp(population_std(values));
    case Aggregator::kRange: return values.maxCoeff() - values.minCoeff();
    case Aggregator::kExpRange: return std::exp(values.maxCoeff() - values.minCoeff());
    case Aggregator::kTwoNorm: return values.norm();
  }
  throw Error(Errc::kInvalidInput, "unknown aggregator");
}

MdeConfig lastde_profile() {
  return MdeConfig{.window_size = 3, .bin_multiplier = 10.0, .scale_count = 5};
}

MdeConfig lastde_pp_profile() {
  return MdeConfig{.window_size = 4, .bin_multiplier = 8.0, .scale_count = 15};
}

void LastdePPConfig::validate() const {
  mde.validate();
  if (sample_count < 2) {
    throw Error(Errc::kInvalidInput, "sample count must be >= 2");
  }
  if (!(sigma_floor > 0.0)) {
    throw Error(Errc::kInvalidInput, "sigma floor must be > 0");
  }
}

double log_likelihood(const Tps& tps) { return tps.values().mean(); }

double log_rank(std::span<const std::int64_t> ranks) { return -mean_log_rank(ranks); }

double mean_entropy(std::span<const double> entropies) {
  if (entropies.empty()) throw Error(Errc::kInvalidInput, "entropy sequence is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < entropies.size(); ++i) {
    if (!(entropies[i] >= 0.0) || !std::isfinite(entropies[i])) {
      throw Error(Errc::kInvalidInput,
                  "entropy at index " + std::to_string(i) + " is not a finite value >= 0");
    }
    sum += entropies[i];
  }
  return -sum / static_cast<double>(entropies.size());
}

double lrr(const Tps& tps, std::span<const std::int64_t> ranks, double denominator_floor) {
  if (static_cast<std::size_t>(tps.size()) != ranks.size()) {
    throw Error(Errc::kInvalidInput, "log-probability and rank lengths differ");
  }
  const double denom = mean_log_rank(ranks);
  if (denom <= denominator_floor) {
    throw Error(Errc::kDegenerateRank,
                "mean log rank is zero (every token has rank 1)");
  }
  return -log_likelihood(tps) / denom;
}

LastdeResult lastde_detailed(const Tps& tps, const MdeConfig& cfg, Aggregator agg,
                             bool strict) {
  LastdeResult r;
  r.profile = mde(tps, cfg);
  r.log_likelihood = log_likelihood(tps);
  r.aggregate = aggregate(r.profile.de_values, agg);
  double denom = r.aggregate;
  if (!(denom >= kAggregateFloor)) {
    if (strict) {
      throw Error(Errc::kDegenerateAggregate,
                  "aggregated MDE is below the floor (no fluctuation across scales)");
    }
    denom = kAggregateFloor;
    r.floored = true;
  }
  r.score = r.log_likelihood / denom;
  return r;
}

double lastde(const Tps& tps, const MdeConfig& cfg, Aggregator agg, bool strict) {
  return lastde_detailed(tps, cfg, agg, strict).score;
}

double lastde_pp(double candidate, std::span<const double> sampled_scores,
                 double sigma_floor) {
  if (sampled_scores.size() < 2) {
    throw Error(Errc::kInvalidInput, "at least two sampled scores are required");
  }
  const Eigen::Map<const Eigen::VectorXd> s(sampled_scores.data(),
                                            static_cast<Eigen::Index>(sampled_scores.size()));
  const double mu = s.mean();
  const double sigma = population_std(s);
  if (!(sigma >= sigma_floor)) {
    throw Error(Errc::kDegenerateSampleDistribution,
                "sampled scores have (near) zero spread");
  }
  return (candidate - mu) / sigma;
}

}  // namespace lastde
