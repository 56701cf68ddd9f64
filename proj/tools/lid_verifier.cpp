// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "lid/verifier.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lid::verifier::run(args, std::cin, std::cout, std::cerr);
}
