// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <cmath>
#include <span>
#include <string>

#include <Eigen/Core>

#include "lastde/error.hpp"

namespace lastde {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A validated token probability sequence: natural-log probabilities of the
/// tokens of one text, in text order. Every value is finite and <= 0.
template <typename Scalar>
class BasicTps {
 public:
  using Vector = VectorX<Scalar>;

  explicit BasicTps(Vector values) : values_(std::move(values)) {
    if (values_.size() < 1) {
      throw Error(Errc::kInvalidInput, "token probability sequence is empty");
    }
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      const Scalar v = values_[i];
      if (!std::isfinite(v) || v > Scalar(0)) {
        throw Error(Errc::kInvalidInput,
                    "log-probability at index " + std::to_string(i) +
                        " is not a finite value <= 0");
      }
    }
  }

  static BasicTps from(std::span<const Scalar> values) {
    return BasicTps(Eigen::Map<const Vector>(values.data(),
                                             static_cast<Eigen::Index>(values.size())));
  }

  const Vector& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  Scalar operator[](Eigen::Index i) const { return values_[i]; }

 private:
  Vector values_;
};

using Tps = BasicTps<double>;

}  // namespace lastde
