// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

// Fast sampling for Lastde++. Every position is drawn independently from its
// top-K distribution given the original prefix; sampled tokens never feed
// back into later positions. Each draw uses a counter-based substream keyed
// by (seed, position, sample), so a batch does not depend on the order in
// which positions or samples are visited.

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "lastde/detectors.hpp"
#include "lastde/text_record.hpp"

namespace lastde {

struct SampleBatch {
  Eigen::MatrixXd tps;  // samples x positions, sampled log-probabilities
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> choices;  // index into each position's top-K
  std::uint64_t seed = 0;

  Eigen::Index count() const noexcept { return tps.rows(); }
};

/// Uniform double in [0, 1) for one (seed, position, sample) triple.
double substream_uniform(std::uint64_t seed, std::uint64_t position,
                         std::uint64_t sample) noexcept;

/// Index into `dist` selected by inverse-CDF lookup of `u` in [0, 1).
std::int32_t categorical_index(const PositionDistribution& dist, double u) noexcept;

std::int32_t draw_index(const PositionDistribution& dist, std::uint64_t seed,
                        std::uint64_t position, std::uint64_t sample) noexcept;

SampleBatch sample_tps_batch(std::span<const PositionDistribution> dists,
                             int sample_count, std::uint64_t seed);

struct LastdePPResult {
  double score = 0.0;
  double candidate = 0.0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  int floored_samples = 0;
};

/// Lastde of the record's own TPS standardized against `cfg.sample_count`
/// sampled TPSs scored with the same MDE settings. Samples with a degenerate
/// aggregate are scored through the floor; `strict` applies to the
/// candidate only.
LastdePPResult lastde_pp_detailed(const TextRecord& record, const LastdePPConfig& cfg,
                                  Aggregator agg = Aggregator::kStd, bool strict = false);

double lastde_pp_pipeline(const TextRecord& record, const LastdePPConfig& cfg,
                          Aggregator agg = Aggregator::kStd, bool strict = false);

}  // namespace lastde
