// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// The primary side of the runner protocol: request framing, verdict parsing,
// fault handling and fixture record/replay. A small Python runner stands in
// for the real one.

#include <doctest.h>

#include <thread>

#include "scripted_sandbox.hpp"
#include "temp_dir.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/runtime/sandbox.hpp"

using namespace wfsynth;
using namespace wfsynth::runtime;
using wfsynth::testing::ScriptedSandbox;
using wfsynth::testing::TempDir;

namespace {

std::vector<std::string> runner_argv() {
    return {"python3", WFSYNTH_STUB_RUNNER, "--max-memory-mb", "256", "--default-timeout-s", "5"};
}

SandboxRequest test_request(std::string code, std::vector<std::string> tests, double timeout_s = 5.0) {
    SandboxRequest r;
    r.op = SandboxOp::Test;
    r.code = std::move(code);
    r.entry_point = "add";
    r.tests = std::move(tests);
    r.timeout_s = timeout_s;
    return r;
}

SandboxRequest exec_request(std::string code, double timeout_s = 5.0) {
    SandboxRequest r;
    r.code = std::move(code);
    r.timeout_s = timeout_s;
    return r;
}

}  // namespace

TEST_CASE("request and verdict JSON") {
    const auto j = test_request("def add(a, b): return a + b", {"assert add(2,3)==5"}, 2.5).to_json();
    CHECK(j["op"] == "test");
    CHECK(j["entry_point"] == "add");
    CHECK(j["tests"].size() == 1);
    CHECK(j["timeout_s"] == 2.5);
    CHECK_FALSE(exec_request("print(1)").to_json().contains("entry_point"));

    const auto v = SandboxVerdict::from_json(
        {{"status", "error"}, {"stdout", ""}, {"stderr", "x"}, {"category", "timeout"}, {"duration_s", 1.0}});
    CHECK(v.status == VerdictStatus::Error);
    CHECK(v.category == std::optional<std::string>("timeout"));
    CHECK(SandboxVerdict::from_json(v.to_json()).to_json() == v.to_json());

    SUBCASE("invariant violations are runner failures") {
        CHECK_THROWS_AS(SandboxVerdict::from_json({{"status", "error"}, {"category", nullptr}}), SandboxError);
        CHECK_THROWS_AS(SandboxVerdict::from_json({{"status", "pass"}, {"category", "timeout"}}), SandboxError);
        CHECK_THROWS_AS(SandboxVerdict::from_json({{"status", "maybe"}}), SandboxError);
    }
    CHECK(is_env_category(kCategoryMissingModule));
    CHECK(is_env_category(kCategoryRunnerFailure));
    CHECK_FALSE(is_env_category(kCategoryTimeout));
    CHECK_FALSE(is_env_category(kCategoryAssertion));
}

TEST_CASE("sandbox keys ignore the timeout but nothing else") {
    const auto a = test_request("def add(a, b): return a + b", {"assert add(2,3)==5"}, 1.0);
    auto b = a;
    b.timeout_s = 9.0;
    CHECK(sandbox_key(a) == sandbox_key(b));
    b.tests.push_back("assert add(0,0)==0");
    CHECK(sandbox_key(a) != sandbox_key(b));
}

TEST_CASE("process runner: pass, missing module, timeout") {
    ProcessSandbox sandbox(runner_argv(), 1, 2.0);
    SUBCASE("correct add function passes its test") {
        const auto v = sandbox.run(test_request("def add(a, b):\n    return a + b\n", {"assert add(2,3)==5"}));
        CHECK(v.status == VerdictStatus::Pass);
        CHECK_FALSE(v.category.has_value());
    }
    SUBCASE("absent module is an environment verdict") {
        const auto v = sandbox.run(exec_request("import pyparsing_absent_module\n"));
        CHECK(v.status == VerdictStatus::Error);
        CHECK(v.category == std::optional<std::string>(kCategoryMissingModule));
        CHECK(v.stderr_text.find("No module named") != std::string::npos);
    }
    SUBCASE("an infinite loop times out near the requested limit") {
        const auto v = sandbox.run(exec_request("while True:\n    pass\n", 1.0));
        CHECK(v.category == std::optional<std::string>(kCategoryTimeout));
        CHECK(v.duration_s == doctest::Approx(1.0).epsilon(0.5));
    }
    SUBCASE("a failing assertion") {
        const auto v = sandbox.run(test_request("def add(a, b):\n    return a - b\n", {"assert add(2,3)==5"}));
        CHECK(v.status == VerdictStatus::Fail);
        CHECK(v.category == std::optional<std::string>(kCategoryAssertion));
    }
    SUBCASE("stdout is captured") {
        CHECK(sandbox.run(exec_request("print(6 * 7)\n")).stdout_text == "42\n");
    }
}

TEST_CASE("process runner: one request, one verdict, in order, across faults") {
    ProcessSandbox sandbox(runner_argv(), 1, 2.0);
    std::vector<std::string> seen;
    for (int i = 0; i < 12; ++i) {
        SandboxRequest req;
        switch (i % 4) {
            case 0: req = exec_request("print(" + std::to_string(i) + ")\n"); break;
            case 1: req = exec_request("raise RuntimeError('bad " + std::to_string(i) + "')\n"); break;
            case 2: req = exec_request("__CRASH__"); break;
            case 3: req = exec_request("__GARBAGE__"); break;
        }
        try {
            const auto v = sandbox.run(req);
            seen.push_back(v.status == VerdictStatus::Pass ? text::trim(v.stdout_text) : *v.category);
        } catch (const SandboxError& e) {
            CHECK(e.category() == kCategoryRunnerFailure);
            seen.push_back("runner-failure");
        }
    }
    const std::vector<std::string> expected = {"0", "runtime-exception", "runner-failure", "runner-failure",
                                               "4", "runtime-exception", "runner-failure", "runner-failure",
                                               "8", "runtime-exception", "runner-failure", "runner-failure"};
    CHECK(seen == expected);
}

TEST_CASE("process runner: a hung runner is killed at timeout plus grace") {
    // `sleep` never answers, so the client deadline is what ends the call.
    ProcessSandbox sandbox({"sleep", "30"}, 1, 0.2);
    const auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(sandbox.run(exec_request("print(1)", 0.3)), SandboxError);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
}

TEST_CASE("process runner: a pool serves concurrent callers") {
    ProcessSandbox sandbox(runner_argv(), 3, 2.0);
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < 6; ++t)
        threads.emplace_back([&, t] {
            const auto v = sandbox.run(exec_request("print(" + std::to_string(t) + ")\n"));
            if (text::trim(v.stdout_text) == std::to_string(t)) ++ok;
        });
    for (auto& t : threads) t.join();
    CHECK(ok == 6);
}

TEST_CASE("a missing runner binary is a runner failure") {
    ProcessSandbox sandbox({"/nonexistent/runner"}, 1, 0.5);
    CHECK_THROWS_AS(sandbox.run(exec_request("print(1)")), SandboxError);
    CHECK_THROWS_AS(ProcessSandbox({}, 1), ConfigError);
}

TEST_CASE("fixture sandbox records verdicts and replays them") {
    TempDir dir;
    auto inner = std::make_shared<ScriptedSandbox>();
    const auto req = test_request("def add(a, b):\n    return a + b", {"assert add(2,3)==5"});
    {
        FixtureSandbox recorder(dir.str(), FixtureSandbox::Mode::Record, inner);
        CHECK(recorder.run(req).status == VerdictStatus::Pass);
        CHECK(recorder.run(req).status == VerdictStatus::Pass);
        CHECK(inner->calls() == 1);
    }
    FixtureSandbox replay(dir.str(), FixtureSandbox::Mode::Replay);
    CHECK(replay.run(req).status == VerdictStatus::Pass);
    auto other = req;
    other.code += "  # BUG";
    try {
        replay.run(other);
        FAIL("expected SandboxError");
    } catch (const SandboxError& e) {
        CHECK(e.category() == kCategoryFixtureMissing);
        CHECK(is_env_category(e.category()));
    }
    text::write_file((dir / (sandbox_key(req) + ".json")).string(), "{broken");
    CHECK_THROWS_AS(replay.run(req), DataError);
    CHECK_THROWS_AS(FixtureSandbox(dir.str(), FixtureSandbox::Mode::Record), ConfigError);
}
