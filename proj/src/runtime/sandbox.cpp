// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/runtime/sandbox.hpp"

#include <chrono>
#include <csignal>
#include <filesystem>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "wfsynth/common/hash.hpp"
#include "wfsynth/common/text.hpp"

namespace wfsynth::runtime {

using nlohmann::json;

namespace {

std::string status_str(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Pass: return "pass";
        case VerdictStatus::Fail: return "fail";
        case VerdictStatus::Error: return "error";
    }
    return "error";
}

json request_body(const SandboxRequest& req) {
    json j = {{"op", req.op == SandboxOp::Exec ? "exec" : "test"}, {"code", req.code}};
    if (req.op == SandboxOp::Test) {
        j["entry_point"] = req.entry_point;
        j["tests"] = req.tests;
    }
    return j;
}

}  // namespace

json SandboxRequest::to_json() const {
    json j = request_body(*this);
    j["timeout_s"] = timeout_s;
    return j;
}

json SandboxVerdict::to_json() const {
    return {{"status", status_str(status)},
            {"stdout", stdout_text},
            {"stderr", stderr_text},
            {"category", category ? json(*category) : json(nullptr)},
            {"duration_s", duration_s}};
}

SandboxVerdict SandboxVerdict::from_json(const json& j) {
    SandboxVerdict v;
    try {
        const std::string status = j.at("status").get<std::string>();
        if (status == "pass") v.status = VerdictStatus::Pass;
        else if (status == "fail") v.status = VerdictStatus::Fail;
        else if (status == "error") v.status = VerdictStatus::Error;
        else throw SandboxError(kCategoryRunnerFailure, "unknown verdict status '" + status + "'");
        v.stdout_text = j.value("stdout", "");
        v.stderr_text = j.value("stderr", "");
        if (j.contains("category") && !j["category"].is_null()) v.category = j["category"].get<std::string>();
        v.duration_s = j.value("duration_s", 0.0);
    } catch (const json::exception& e) {
        throw SandboxError(kCategoryRunnerFailure, std::string("malformed verdict: ") + e.what());
    }
    if (v.status == VerdictStatus::Error && !v.category)
        throw SandboxError(kCategoryRunnerFailure, "error verdict without a category");
    if (v.status == VerdictStatus::Pass && v.category)
        throw SandboxError(kCategoryRunnerFailure, "pass verdict with a category");
    return v;
}

bool is_env_category(const std::string& category) { return text::starts_with(category, "env-"); }

// ---------------------------------------------------------------------------
// ProcessSandbox

struct ProcessSandbox::Worker {
    pid_t pid = -1;
    int to_child = -1;
    int from_child = -1;
    std::string buffer;

    ~Worker() {
        if (to_child >= 0) ::close(to_child);
        if (from_child >= 0) ::close(from_child);
        if (pid > 0) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
        }
    }
};

ProcessSandbox::ProcessSandbox(std::vector<std::string> argv, int pool_size, double grace_s)
    : argv_(std::move(argv)), pool_size_(pool_size), grace_s_(grace_s) {
    if (argv_.empty()) throw ConfigError("sandbox runner command is empty");
    if (pool_size_ < 1) throw ConfigError("sandbox pool size must be at least 1");
    // A runner that dies mid-write must surface as an error, not kill us.
    std::signal(SIGPIPE, SIG_IGN);
}

ProcessSandbox::~ProcessSandbox() = default;

std::unique_ptr<ProcessSandbox::Worker> ProcessSandbox::acquire() {
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !idle_.empty() || live_ < pool_size_; });
        if (!idle_.empty()) {
            auto w = std::move(idle_.back());
            idle_.pop_back();
            return w;
        }
        ++live_;
    }
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
        release(nullptr);
        throw SandboxError(kCategoryRunnerFailure, "cannot create pipes");
    }
    std::vector<char*> args;
    for (auto& a : argv_) args.push_back(a.data());
    args.push_back(nullptr);
    const pid_t pid = ::fork();
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execvp(args[0], args.data());
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    auto w = std::make_unique<Worker>();
    w->pid = pid;
    w->to_child = in_pipe[1];
    w->from_child = out_pipe[0];
    if (pid < 0) {
        w->pid = -1;
        release(nullptr);
        throw SandboxError(kCategoryRunnerFailure, "cannot fork runner");
    }
    return w;
}

void ProcessSandbox::release(std::unique_ptr<Worker> w) {
    {
        std::lock_guard lock(mu_);
        if (w) idle_.push_back(std::move(w));
        else --live_;
    }
    cv_.notify_one();
}

SandboxVerdict ProcessSandbox::run(const SandboxRequest& req) {
    auto w = acquire();
    auto fail = [&](const std::string& why) -> SandboxError {
        w.reset();  // kills the runner; the next caller spawns a fresh one
        release(nullptr);
        return SandboxError(kCategoryRunnerFailure, why);
    };

    const std::string line = req.to_json().dump() + "\n";
    for (std::size_t off = 0; off < line.size();) {
        const ssize_t n = ::write(w->to_child, line.data() + off, line.size() - off);
        if (n <= 0) throw fail("runner closed its input (command: " + argv_[0] + ")");
        off += static_cast<std::size_t>(n);
    }

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<std::int64_t>((req.timeout_s + grace_s_) * 1000));
    std::size_t nl;
    while ((nl = w->buffer.find('\n')) == std::string::npos) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        pollfd pfd{w->from_child, POLLIN, 0};
        const int ready = left.count() <= 0 ? 0 : ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready == 0) throw fail("runner produced no verdict within the deadline");
        if (ready < 0) throw fail("poll failed on runner output");
        char buf[4096];
        const ssize_t n = ::read(w->from_child, buf, sizeof buf);
        if (n <= 0) throw fail("runner exited without a verdict");
        w->buffer.append(buf, static_cast<std::size_t>(n));
    }
    const std::string reply = w->buffer.substr(0, nl);
    w->buffer.erase(0, nl + 1);

    SandboxVerdict verdict;
    try {
        verdict = SandboxVerdict::from_json(json::parse(reply));
    } catch (const json::exception& e) {
        throw fail(std::string("runner emitted invalid JSON: ") + e.what());
    } catch (const SandboxError& e) {
        throw fail(e.what());
    }
    release(std::move(w));
    return verdict;
}

// ---------------------------------------------------------------------------
// FixtureSandbox

std::string sandbox_key(const SandboxRequest& req) { return sha256_hex(request_body(req).dump()); }

FixtureSandbox::FixtureSandbox(std::string dir, Mode mode, std::shared_ptr<Sandbox> inner)
    : dir_(std::move(dir)), mode_(mode), inner_(std::move(inner)) {
    if (mode_ == Mode::Record && !inner_) throw ConfigError("record-mode sandbox needs a runner");
}

SandboxVerdict FixtureSandbox::run(const SandboxRequest& req) {
    const std::string key = sandbox_key(req);
    const std::string path = (std::filesystem::path(dir_) / (key + ".json")).string();
    if (std::filesystem::exists(path)) {
        try {
            return SandboxVerdict::from_json(json::parse(text::read_file(path)).at("verdict"));
        } catch (const json::exception& e) {
            throw DataError("malformed sandbox fixture " + path + ": " + e.what());
        }
    }
    if (mode_ == Mode::Replay) throw SandboxError(kCategoryFixtureMissing, "no sandbox fixture " + key);
    SandboxVerdict v = inner_->run(req);
    const json record = {{"key", key}, {"request", request_body(req)}, {"verdict", v.to_json()}};
    text::write_file(path, record.dump(2) + "\n");
    return v;
}

}  // namespace wfsynth::runtime
