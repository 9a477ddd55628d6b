// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <stdexcept>
#include <string>

namespace lastde {

enum class Errc {
  kInvalidInput,
  kInfeasibleScale,
  kInfeasibleWindow,
  kInsufficientSegments,
  kInsufficientData,
  kInvalidBinCount,
  kTextTooShort,
  kDegenerateAggregate,
  kDegenerateRank,
  kDegenerateSampleDistribution,
  kFormat,
  kUnknownDetector,
  kMissingTopK,
  kEmptyClass,
};

const char* errc_name(Errc code) noexcept;

/// Every library failure is reported through this type; `code()` lets
/// callers route on the failure class without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lastde
