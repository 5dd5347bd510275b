// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Client side of the code-execution runner protocol: one JSON object per line
// on the runner's stdin, one verdict line back on its stdout.

#pragma once

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/common/errors.hpp"

namespace wfsynth::runtime {

enum class SandboxOp { Exec, Test };
enum class VerdictStatus { Pass, Fail, Error };

struct SandboxRequest {
    SandboxOp op = SandboxOp::Exec;
    std::string code;
    std::string entry_point;          // test requests only
    std::vector<std::string> tests;   // assertion snippets, test requests only
    double timeout_s = 10.0;

    nlohmann::json to_json() const;
};

// Verdict categories.
inline constexpr const char* kCategoryMissingModule = "env-missing-module";
inline constexpr const char* kCategoryRuntime = "runtime-exception";
inline constexpr const char* kCategoryTimeout = "timeout";
inline constexpr const char* kCategoryAssertion = "assertion";
/// Raised client-side when the runner process itself misbehaves.
inline constexpr const char* kCategoryRunnerFailure = "env-runner-failure";
/// Raised by FixtureSandbox in replay mode when no recording exists.
inline constexpr const char* kCategoryFixtureMissing = "env-fixture-missing";

struct SandboxVerdict {
    VerdictStatus status = VerdictStatus::Pass;
    std::string stdout_text;
    std::string stderr_text;
    std::optional<std::string> category;
    double duration_s = 0.0;

    nlohmann::json to_json() const;
    /// Parses and checks the status/category invariants; throws SandboxError
    /// (runner failure) on a malformed verdict.
    static SandboxVerdict from_json(const nlohmann::json& j);
};

bool is_env_category(const std::string& category);

/// Infrastructure failure (env-* category): the code under test was never
/// fairly judged.
class SandboxError : public Error {
public:
    SandboxError(std::string category, const std::string& detail)
        : Error(category + ": " + detail), category_(std::move(category)) {}
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

class Sandbox {
public:
    virtual ~Sandbox() = default;
    /// Returns the runner's verdict. Throws SandboxError only when no verdict
    /// could be obtained; env-* verdicts are returned as data.
    virtual SandboxVerdict run(const SandboxRequest& req) = 0;
};

/// Spawns runner processes (`argv[0]` resolved via PATH) and keeps them alive
/// across requests. Up to `pool_size` runners serve concurrent callers.
class ProcessSandbox : public Sandbox {
public:
    explicit ProcessSandbox(std::vector<std::string> argv, int pool_size = 1, double grace_s = 10.0);
    ~ProcessSandbox() override;
    ProcessSandbox(const ProcessSandbox&) = delete;
    ProcessSandbox& operator=(const ProcessSandbox&) = delete;

    SandboxVerdict run(const SandboxRequest& req) override;

private:
    struct Worker;
    std::unique_ptr<Worker> acquire();
    void release(std::unique_ptr<Worker> w);

    std::vector<std::string> argv_;
    int pool_size_;
    double grace_s_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::vector<std::unique_ptr<Worker>> idle_;
    int live_ = 0;
};

/// Content key of a request (timeout excluded, like gateway fingerprints).
std::string sandbox_key(const SandboxRequest& req);

/// Serves verdicts from `<dir>/<key>.json`. In record mode a miss is forwarded
/// to `inner` and persisted; in replay mode a miss throws SandboxError.
class FixtureSandbox : public Sandbox {
public:
    enum class Mode { Replay, Record };

    FixtureSandbox(std::string dir, Mode mode, std::shared_ptr<Sandbox> inner = nullptr);
    SandboxVerdict run(const SandboxRequest& req) override;

private:
    std::string dir_;
    Mode mode_;
    std::shared_ptr<Sandbox> inner_;
};

}  // namespace wfsynth::runtime
