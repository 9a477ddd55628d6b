// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lastde::cli {

/// Runs the command line `args` (program name excluded) and returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lastde::cli
