// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "wfsynth/cli/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wfsynth::cli::run_cli(args, std::cout, std::cerr);
}
