// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// The `wfsynth` command surface. Exit codes: 0 success, 2 configuration
// error, 3 data error, 4 synthesis error, 5 execution error.

#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wfsynth/gateway/transport.hpp"
#include "wfsynth/runtime/sandbox.hpp"

namespace wfsynth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSynthesis = 4;
inline constexpr int kExitExecution = 5;

/// Stand-ins for the network transport and the sandbox runner process, used
/// by embedders and tests. Null members fall back to the configured ones.
struct Backends {
    std::shared_ptr<gateway::Transport> transport;
    std::shared_ptr<runtime::Sandbox> sandbox_runner;
};

/// Parses `args` (without the program name) and runs the selected command.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Backends& backends = {});

}  // namespace wfsynth::cli
