// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// A workspace is one JSON config file plus the directories it names. Relative
// paths resolve against the config file's directory; outputs go under the
// output root (the config directory unless overridden).

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/exec/engine.hpp"
#include "wfsynth/gateway/config.hpp"
#include "wfsynth/runtime/sandbox.hpp"

namespace wfsynth::cli {

struct SandboxSettings {
    std::vector<std::string> command;  // runner argv; empty means none configured
    int pool_size = 4;
    double timeout_s = 10.0;
    std::string fixtures_dir;          // resolved
};

struct Workspace {
    std::string config_dir;
    gateway::GatewayConfig gateway;
    SandboxSettings sandbox;
    exec::ExecLimits limits;
    double operator_temperature = 0.0;
    double f1_threshold = 0.3;

    // Inputs (resolved).
    std::string tasks_path;
    std::string trajectories_dir;
    std::string data_dir;
    std::string fixtures_dir;

    // Output root and derived locations.
    std::string output_root;
    std::string priors_path() const;
    std::string out_dir() const;
    std::string runs_dir() const;
    std::string reports_dir() const;

    /// Reads the config file. Throws ConfigError when it is missing or invalid.
    static Workspace load(const std::string& config_path);
    static Workspace from_json(const nlohmann::json& j, const std::string& config_dir);

    std::string dataset_path(const std::string& task_id) const;

    /// `transport` replaces the HTTP transport outside replay mode; replay
    /// never gets one.
    std::unique_ptr<gateway::Gateway> make_gateway(std::shared_ptr<gateway::Transport> transport = nullptr) const;
    /// Replay: recorded verdicts only. Record: recorded verdicts, falling back
    /// to the runner and saving. Live: the runner directly. Null when a runner
    /// is needed but none is configured.
    /// `runner` replaces the configured runner process.
    std::shared_ptr<runtime::Sandbox> make_sandbox(std::shared_ptr<runtime::Sandbox> runner = nullptr) const;

    /// "replay" in replay mode so reruns overwrite identical files; a UTC
    /// timestamp otherwise.
    std::string run_name() const;
};

}  // namespace wfsynth::cli
