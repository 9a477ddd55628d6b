// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lastde/tps.hpp"

namespace lastde {

/// Tolerance on the total probability of a renormalized top-K distribution.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Top-K conditional distribution of the next token at one position, given
/// the text's own prefix. Log-probabilities are non-increasing.
struct PositionDistribution {
  std::vector<std::int64_t> token_ids;
  Eigen::VectorXd logprobs;
  bool renormalized = false;

  Eigen::Index size() const noexcept { return logprobs.size(); }

  /// Builds a distribution from raw (possibly truncated) log-probabilities:
  /// sorts descending and rescales so the retained mass sums to 1. The
  /// ratios between retained probabilities are unchanged.
  static PositionDistribution renormalize(std::vector<std::int64_t> token_ids,
                                          const Eigen::VectorXd& raw_logprobs);

  /// Throws kFormat unless the distribution is non-empty, non-increasing and
  /// sums to 1 within kNormalizationTolerance.
  void validate() const;

  /// exp(logprobs).sum()
  double total_mass() const;

  friend bool operator==(const PositionDistribution& a, const PositionDistribution& b);
};

enum class Label { kHuman, kMachine, kUnknown };

std::string_view label_name(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name);

struct Provenance {
  std::string proxy_model_name;
  std::string source_model_name;
  std::optional<double> retained_mass;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Everything the detectors need about one text: per-token log-probability,
/// 1-based rank, and entropy of the full next-token distribution, plus the
/// optional top-K distributions used for sampling.
struct TextRecord {
  std::string id;
  Label label = Label::kUnknown;
  Eigen::VectorXd logprob;
  std::vector<std::int64_t> rank;
  Eigen::VectorXd entropy;
  std::optional<std::vector<PositionDistribution>> topk;
  Provenance provenance;

  Eigen::Index n_tokens() const noexcept { return logprob.size(); }
  Tps tps() const { return Tps(logprob); }
  std::span<const double> entropy_span() const {
    return {entropy.data(), static_cast<std::size_t>(entropy.size())};
  }

  friend bool operator==(const TextRecord& a, const TextRecord& b);
};

}  // namespace lastde
