// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return lastde::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
