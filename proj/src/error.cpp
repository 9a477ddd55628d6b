// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/error.hpp"

namespace lastde {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidInput: return "invalid-input";
    case Errc::kInfeasibleScale: return "infeasible-scale";
    case Errc::kInfeasibleWindow: return "infeasible-window";
    case Errc::kInsufficientSegments: return "insufficient-segments";
    case Errc::kInsufficientData: return "insufficient-data";
    case Errc::kInvalidBinCount: return "invalid-bin-count";
    case Errc::kTextTooShort: return "text-too-short";
    case Errc::kDegenerateAggregate: return "degenerate-aggregate";
    case Errc::kDegenerateRank: return "degenerate-rank";
    case Errc::kDegenerateSampleDistribution: return "degenerate-sample-distribution";
    case Errc::kFormat: return "format";
    case Errc::kUnknownDetector: return "unknown-detector";
    case Errc::kMissingTopK: return "missing-topk";
    case Errc::kEmptyClass: return "empty-class";
  }
  return "unknown";
}

}  // namespace lastde
