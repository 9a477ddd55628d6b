// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/sampler.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lastde {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double substream_uniform(std::uint64_t seed, std::uint64_t position,
                         std::uint64_t sample) noexcept {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ splitmix64(position + 0x632be59bd9b4e019ULL));
  key = splitmix64(key ^ splitmix64(sample + 0x85157af5b2f3c6a1ULL));
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

std::int32_t categorical_index(const PositionDistribution& dist, double u) noexcept {
  double cumulative = 0.0;
  const Eigen::Index last = dist.size() - 1;
  for (Eigen::Index i = 0; i < last; ++i) {
    cumulative += std::exp(dist.logprobs[i]);
    if (u < cumulative) return static_cast<std::int32_t>(i);
  }
  return static_cast<std::int32_t>(last);
}

std::int32_t draw_index(const PositionDistribution& dist, std::uint64_t seed,
                        std::uint64_t position, std::uint64_t sample) noexcept {
  return categorical_index(dist, substream_uniform(seed, position, sample));
}

SampleBatch sample_tps_batch(std::span<const PositionDistribution> dists,
                             int sample_count, std::uint64_t seed) {
  if (dists.empty()) {
    throw Error(Errc::kInvalidInput, "no position distributions to sample from");
  }
  if (sample_count < 2) {
    throw Error(Errc::kInvalidInput, "sample count must be >= 2");
  }
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (!dists[i].renormalized) {
      throw Error(Errc::kFormat,
                  "distribution at position " + std::to_string(i) + " is not renormalized");
    }
    dists[i].validate();
  }

  const auto n = static_cast<Eigen::Index>(dists.size());
  SampleBatch batch;
  batch.seed = seed;
  batch.tps.resize(sample_count, n);
  batch.choices.resize(sample_count, n);
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    const auto& dist = dists[static_cast<std::size_t>(pos)];
    for (Eigen::Index j = 0; j < sample_count; ++j) {
      const auto idx = draw_index(dist, seed, static_cast<std::uint64_t>(pos),
                                  static_cast<std::uint64_t>(j));
      batch.choices(j, pos) = idx;
      batch.tps(j, pos) = dist.logprobs[idx];
    }
  }
  return batch;
}

LastdePPResult lastde_pp_detailed(const TextRecord& record, const LastdePPConfig& cfg,
                                  Aggregator agg, bool strict) {
  cfg.validate();
  if (!record.topk) {
    throw Error(Errc::kMissingTopK, "record '" + record.id + "' has no top-K distributions");
  }
  if (static_cast<Eigen::Index>(record.topk->size()) != record.n_tokens()) {
    throw Error(Errc::kFormat, "top-K length differs from token count");
  }

  LastdePPResult r;
  r.candidate = lastde(record.tps(), cfg.mde, agg, strict);

  const SampleBatch batch = sample_tps_batch(*record.topk, cfg.sample_count, cfg.seed);
  std::vector<double> scores(static_cast<std::size_t>(batch.count()));
  for (Eigen::Index j = 0; j < batch.count(); ++j) {
    const auto detail =
        lastde_detailed(Tps(batch.tps.row(j).transpose()), cfg.mde, agg, /*strict=*/false);
    r.floored_samples += detail.floored ? 1 : 0;
    scores[static_cast<std::size_t>(j)] = detail.score;
  }

  const Eigen::Map<const Eigen::VectorXd> s(scores.data(), batch.count());
  r.sample_mean = s.mean();
  r.sample_std = std::sqrt((s.array() - r.sample_mean).square().mean());
  r.score = lastde_pp(r.candidate, scores, cfg.sigma_floor);
  return r;
}

double lastde_pp_pipeline(const TextRecord& record, const LastdePPConfig& cfg,
                          Aggregator agg, bool strict) {
  return lastde_pp_detailed(record, cfg, agg, strict).score;
}

}  // namespace lastde
