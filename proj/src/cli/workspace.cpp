// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/cli/workspace.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>

#include "wfsynth/common/text.hpp"

namespace wfsynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path.string() : (fs::path(base) / path).lexically_normal().string();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

std::string Workspace::priors_path() const { return (fs::path(output_root) / "priors.json").string(); }
std::string Workspace::out_dir() const { return (fs::path(output_root) / "out").string(); }
std::string Workspace::runs_dir() const { return (fs::path(output_root) / "runs").string(); }
std::string Workspace::reports_dir() const { return (fs::path(output_root) / "reports").string(); }

std::string Workspace::dataset_path(const std::string& task_id) const {
    return (fs::path(data_dir) / (task_id + ".jsonl")).string();
}

Workspace Workspace::from_json(const json& j, const std::string& config_dir) {
    Workspace ws;
    ws.config_dir = config_dir;
    ws.gateway = gateway::gateway_config_from_json(j);
    ws.tasks_path = resolve(config_dir, get_or<std::string>(j, "tasks", "tasks.json"));
    ws.trajectories_dir = resolve(config_dir, get_or<std::string>(j, "trajectories_dir", "trajectories"));
    ws.data_dir = resolve(config_dir, get_or<std::string>(j, "data_dir", "data"));
    ws.fixtures_dir = resolve(config_dir, get_or<std::string>(j, "fixtures_dir", "fixtures"));
    ws.output_root = resolve(config_dir, get_or<std::string>(j, "output_root", "."));
    ws.operator_temperature = get_or(j, "operator_temperature", ws.operator_temperature);
    ws.f1_threshold = get_or(j, "f1_threshold", ws.f1_threshold);
    if (ws.operator_temperature < 0) throw ConfigError("operator_temperature must be non-negative");

    const json sb = j.value("sandbox", json::object());
    ws.sandbox.command = get_or(sb, "command", ws.sandbox.command);
    ws.sandbox.pool_size = get_or(sb, "pool_size", ws.sandbox.pool_size);
    ws.sandbox.timeout_s = get_or(sb, "timeout_s", ws.sandbox.timeout_s);
    ws.sandbox.fixtures_dir = resolve(config_dir, get_or<std::string>(sb, "fixtures_dir", "sandbox_fixtures"));
    if (ws.sandbox.pool_size < 1) throw ConfigError("sandbox.pool_size must be at least 1");
    if (!(ws.sandbox.timeout_s > 0)) throw ConfigError("sandbox.timeout_s must be positive");

    const json lim = j.value("limits", json::object());
    ws.limits.node_budget = get_or(lim, "node_budget", ws.limits.node_budget);
    ws.limits.node_timeout_s = get_or(lim, "node_timeout_s", ws.limits.node_timeout_s);
    ws.limits.sandbox_timeout_s = ws.sandbox.timeout_s;
    if (ws.limits.node_budget < 1) throw ConfigError("limits.node_budget must be at least 1");
    return ws;
}

Workspace Workspace::load(const std::string& config_path) {
    if (!fs::exists(config_path)) throw ConfigError("config file not found: " + config_path);
    json j;
    try {
        j = json::parse(text::read_file(config_path));
    } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
    }
    const fs::path dir = fs::absolute(config_path).parent_path();
    return from_json(j, dir.string());
}

std::unique_ptr<gateway::Gateway> Workspace::make_gateway(std::shared_ptr<gateway::Transport> transport) const {
    if (!transport || gateway.mode == gateway::Mode::Replay) return gateway::make_gateway(gateway, fixtures_dir);
    gateway::GatewayOptions opts;
    opts.mode = gateway.mode;
    opts.fixture_dir = fixtures_dir;
    opts.max_in_flight = gateway.max_in_flight;
    return std::make_unique<gateway::Gateway>(std::move(opts), std::move(transport), gateway.pricing());
}

std::shared_ptr<runtime::Sandbox> Workspace::make_sandbox(std::shared_ptr<runtime::Sandbox> runner) const {
    using runtime::FixtureSandbox;
    std::shared_ptr<runtime::Sandbox> process = std::move(runner);
    if (!process && !sandbox.command.empty()) process = std::make_shared<runtime::ProcessSandbox>(sandbox.command, sandbox.pool_size);
    switch (gateway.mode) {
        case gateway::Mode::Replay:
            return std::make_shared<FixtureSandbox>(sandbox.fixtures_dir, FixtureSandbox::Mode::Replay);
        case gateway::Mode::Record:
            if (!process) return nullptr;
            return std::make_shared<FixtureSandbox>(sandbox.fixtures_dir, FixtureSandbox::Mode::Record, process);
        case gateway::Mode::Live: return process;
    }
    return nullptr;
}

std::string Workspace::run_name() const {
    if (gateway.mode == gateway::Mode::Replay) return "replay";
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

}  // namespace wfsynth::cli
