// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

// Multiscale diversity entropy (MDE) of a token probability sequence.
//
// For each coarse-graining scale tau the sequence is replaced by the means of
// tau consecutive values, cut into overlapping windows of length s, and the
// cosine similarities of adjacent windows are histogrammed over [-1, 1] into
// eps equal bins. The normalized Shannon entropy of that histogram is the
// diversity entropy (DE) at that scale; 0 means every adjacent pair of windows
// points the same way, 1 means the similarities are spread evenly over all
// bins.
//
// Every function here is pure and templated on the scalar type.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lastde/error.hpp"
#include "lastde/tps.hpp"

namespace lastde {

/// Norm below which a window is treated as the zero vector.
inline constexpr double kZeroNormTolerance = 1e-12;

struct MdeConfig {
  int window_size = 3;          // s
  double bin_multiplier = 10.0; // k, eps = round(k * n)
  int scale_count = 5;          // tau'
  bool clamp_scales = true;

  void validate() const {
    if (window_size < 2) {
      throw Error(Errc::kInvalidInput, "window size must be >= 2");
    }
    if (scale_count < 1) {
      throw Error(Errc::kInvalidInput, "scale count must be >= 1");
    }
    if (!(bin_multiplier > 0.0) || !std::isfinite(bin_multiplier)) {
      throw Error(Errc::kInvalidInput, "bin multiplier must be > 0");
    }
  }

  /// Number of histogram bins for a text of `n_tokens` tokens.
  int bin_count(Eigen::Index n_tokens) const {
    const auto eps = std::llround(bin_multiplier * static_cast<double>(n_tokens));
    return static_cast<int>(std::max<long long>(eps, 2));
  }
};

template <typename Scalar>
struct BasicMdeProfile {
  VectorX<Scalar> de_values;  // one entry per scale, tau = 1..scales_used
  int scales_used = 0;
  int bin_count = 0;
  bool clamped = false;  // true when scale_count was reduced to n - s
};

using MdeProfile = BasicMdeProfile<double>;

/// Means of every run of `scale` consecutive values (length n - scale + 1).
/// At scale 1 the input is returned unchanged.
template <typename Derived>
VectorX<typename Derived::Scalar> multiscale_transform(
    const Eigen::MatrixBase<Derived>& values, Eigen::Index scale) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  if (scale < 1 || scale > n) {
    throw Error(Errc::kInfeasibleScale,
                "scale " + std::to_string(scale) + " is infeasible for " +
                    std::to_string(n) + " values");
  }
  if (scale == 1) return values;

  VectorX<Scalar> out(n - scale + 1);
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out[j] = values.segment(j, scale).sum() / static_cast<Scalar>(scale);
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> multiscale_transform(const BasicTps<Scalar>& tps,
                                     Eigen::Index scale) {
  return multiscale_transform(tps.values(), scale);
}

/// Length-`window` segments taken with step 1, one per row.
template <typename Derived>
MatrixX<typename Derived::Scalar> sliding_segments(
    const Eigen::MatrixBase<Derived>& seq, Eigen::Index window) {
  const Eigen::Index len = seq.size();
  if (window < 1 || window > len) {
    throw Error(Errc::kInfeasibleWindow,
                "window " + std::to_string(window) + " exceeds sequence length " +
                    std::to_string(len));
  }
  MatrixX<typename Derived::Scalar> rows(len - window + 1, window);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    rows.row(i) = seq.segment(i, window).transpose();
  }
  return rows;
}

/// Cosine similarity of each pair of adjacent rows, clamped into [-1, 1].
/// Two zero rows are similar (1); a zero row next to a non-zero one is 0.
template <typename Derived>
VectorX<typename Derived::Scalar> segment_similarities(
    const Eigen::MatrixBase<Derived>& segments) {
  using Scalar = typename Derived::Scalar;
  if (segments.rows() < 2) {
    throw Error(Errc::kInsufficientSegments,
                "at least two segments are required, got " +
                    std::to_string(segments.rows()));
  }
  const VectorX<Scalar> sq_norms = segments.rowwise().squaredNorm();
  const Scalar tol2 = Scalar(kZeroNormTolerance * kZeroNormTolerance);

  VectorX<Scalar> out(segments.rows() - 1);
  for (Eigen::Index k = 0; k + 1 < segments.rows(); ++k) {
    const bool zero_a = sq_norms[k] < tol2;
    const bool zero_b = sq_norms[k + 1] < tol2;
    if (zero_a || zero_b) {
      out[k] = (zero_a && zero_b) ? Scalar(1) : Scalar(0);
      continue;
    }
    const Scalar dot = segments.row(k).dot(segments.row(k + 1));
    // sqrt of the product keeps exact ratios exact, e.g. 4 / sqrt(25) == 0.8.
    const Scalar cos = dot / std::sqrt(sq_norms[k] * sq_norms[k + 1]);
    out[k] = std::clamp(cos, Scalar(-1), Scalar(1));
  }
  return out;
}

/// Zero-based bin of `value` among `bins` equal bins over [-1, 1]. Bins are
/// [lo, hi) except the last, which also takes +1.
template <typename Scalar>
int similarity_bin(Scalar value, int bins) {
  const auto idx = static_cast<long long>(
      std::floor((static_cast<double>(value) + 1.0) * bins / 2.0));
  return static_cast<int>(std::clamp<long long>(idx, 0, bins - 1));
}

/// Normalized histogram of `similarities` over `bins` equal states.
template <typename Derived>
VectorX<typename Derived::Scalar> probability_states(
    const Eigen::MatrixBase<Derived>& similarities, int bins) {
  using Scalar = typename Derived::Scalar;
  if (bins < 2) {
    throw Error(Errc::kInvalidBinCount, "bin count must be >= 2");
  }
  if (similarities.size() == 0) {
    throw Error(Errc::kInsufficientData, "no similarities to bin");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (Eigen::Index i = 0; i < similarities.size(); ++i) {
    ++counts[static_cast<std::size_t>(similarity_bin(similarities[i], bins))];
  }
  const auto total = static_cast<Scalar>(similarities.size());
  VectorX<Scalar> p(bins);
  for (int i = 0; i < bins; ++i) {
    p[i] = static_cast<Scalar>(counts[static_cast<std::size_t>(i)]) / total;
  }
  return p;
}

/// Shannon entropy of `states` divided by ln(bins); empty bins contribute
/// nothing.
template <typename Derived>
typename Derived::Scalar diversity_entropy(
    const Eigen::MatrixBase<Derived>& states, int bins) {
  using Scalar = typename Derived::Scalar;
  if (bins < 2) {
    throw Error(Errc::kInvalidBinCount, "bin count must be >= 2");
  }
  if (states.size() != bins) {
    throw Error(Errc::kInvalidInput, "state vector length differs from bin count");
  }
  Scalar h = 0;
  for (Eigen::Index i = 0; i < states.size(); ++i) {
    const Scalar p = states[i];
    if (p > Scalar(0)) h -= p * std::log(p);
  }
  const Scalar de = h / std::log(static_cast<Scalar>(bins));
  return std::clamp(de, Scalar(0), Scalar(1));
}

/// Diversity entropy of `values` at one scale.
template <typename Derived>
typename Derived::Scalar scale_diversity_entropy(
    const Eigen::MatrixBase<Derived>& values, Eigen::Index scale,
    Eigen::Index window, int bins) {
  const auto coarse = multiscale_transform(values, scale);
  const auto segments = sliding_segments(coarse, window);
  const auto sims = segment_similarities(segments);
  return diversity_entropy(probability_states(sims, bins), bins);
}

/// DE at scales 1..scale_count. The bin count is fixed from the original
/// token count. Scales leaving fewer than one similarity are dropped when
/// `clamp_scales` is set and rejected otherwise.
template <typename Scalar>
BasicMdeProfile<Scalar> mde(const BasicTps<Scalar>& tps, const MdeConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = tps.size();
  const Eigen::Index s = cfg.window_size;
  if (n < s + 1) {
    throw Error(Errc::kTextTooShort,
                "text of " + std::to_string(n) + " tokens is too short for window " +
                    std::to_string(s));
  }
  const Eigen::Index feasible = n - s;
  Eigen::Index used = cfg.scale_count;
  BasicMdeProfile<Scalar> profile;
  if (used > feasible) {
    if (!cfg.clamp_scales) {
      throw Error(Errc::kInfeasibleScale,
                  "scale count " + std::to_string(cfg.scale_count) +
                      " exceeds the " + std::to_string(feasible) +
                      " scales feasible for this text");
    }
    used = feasible;
    profile.clamped = true;
  }
  profile.bin_count = cfg.bin_count(n);
  profile.scales_used = static_cast<int>(used);
  profile.de_values.resize(used);
  for (Eigen::Index tau = 1; tau <= used; ++tau) {
    profile.de_values[tau - 1] =
        scale_diversity_entropy(tps.values(), tau, s, profile.bin_count);
  }
  return profile;
}

}  // namespace lastde
