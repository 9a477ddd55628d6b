// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/text_record.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lastde/error.hpp"

namespace lastde {
namespace {

bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace

PositionDistribution PositionDistribution::renormalize(
    std::vector<std::int64_t> token_ids, const Eigen::VectorXd& raw_logprobs) {
  if (raw_logprobs.size() == 0 ||
      static_cast<std::size_t>(raw_logprobs.size()) != token_ids.size()) {
    throw Error(Errc::kFormat, "top-K ids and log-probabilities must be non-empty and equal length");
  }
  if (!raw_logprobs.allFinite()) {
    throw Error(Errc::kFormat, "top-K log-probabilities must be finite");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(raw_logprobs.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (raw_logprobs[a] != raw_logprobs[b]) return raw_logprobs[a] > raw_logprobs[b];
    return token_ids[static_cast<std::size_t>(a)] < token_ids[static_cast<std::size_t>(b)];
  });

  const double top = raw_logprobs.maxCoeff();
  const double log_mass = top + std::log((raw_logprobs.array() - top).exp().sum());

  PositionDistribution d;
  d.token_ids.reserve(order.size());
  d.logprobs.resize(raw_logprobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    d.token_ids.push_back(token_ids[static_cast<std::size_t>(order[i])]);
    d.logprobs[static_cast<Eigen::Index>(i)] = std::min(raw_logprobs[order[i]] - log_mass, 0.0);
  }
  d.renormalized = true;
  return d;
}

double PositionDistribution::total_mass() const { return logprobs.array().exp().sum(); }

void PositionDistribution::validate() const {
  if (logprobs.size() == 0) throw Error(Errc::kFormat, "top-K distribution is empty");
  if (static_cast<std::size_t>(logprobs.size()) != token_ids.size()) {
    throw Error(Errc::kFormat, "top-K ids and log-probabilities differ in length");
  }
  for (Eigen::Index i = 0; i < logprobs.size(); ++i) {
    if (!std::isfinite(logprobs[i]) || logprobs[i] > 0.0) {
      throw Error(Errc::kFormat, "top-K log-probability " + std::to_string(i) +
                                     " is not a finite value <= 0");
    }
    if (i > 0 && logprobs[i] > logprobs[i - 1]) {
      throw Error(Errc::kFormat, "top-K log-probabilities are not descending at " +
                                     std::to_string(i));
    }
  }
  if (std::abs(total_mass() - 1.0) > kNormalizationTolerance) {
    throw Error(Errc::kFormat, "top-K distribution is not normalized");
  }
}

bool operator==(const PositionDistribution& a, const PositionDistribution& b) {
  return a.token_ids == b.token_ids && same_vector(a.logprobs, b.logprobs) &&
         a.renormalized == b.renormalized;
}

bool operator==(const TextRecord& a, const TextRecord& b) {
  return a.id == b.id && a.label == b.label && same_vector(a.logprob, b.logprob) &&
         a.rank == b.rank && same_vector(a.entropy, b.entropy) && a.topk == b.topk &&
         a.provenance == b.provenance;
}

std::string_view label_name(Label label) noexcept {
  switch (label) {
    case Label::kHuman: return "human";
    case Label::kMachine: return "machine";
    case Label::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view name) {
  if (name == "human") return Label::kHuman;
  if (name == "machine") return Label::kMachine;
  if (name == "unknown") return Label::kUnknown;
  return std::nullopt;
}

}  // namespace lastde
