// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "scripted_sandbox.hpp"

namespace wfsynth::testing {

using runtime::SandboxVerdict;
using runtime::VerdictStatus;

namespace {

SandboxVerdict error(const char* category, std::string stderr_text) {
    SandboxVerdict v;
    v.status = VerdictStatus::Error;
    v.category = category;
    v.stderr_text = std::move(stderr_text);
    return v;
}

}  // namespace

SandboxVerdict ScriptedSandbox::run(const runtime::SandboxRequest& req) {
    ++calls_;
    {
        std::lock_guard lock(mu_);
        requests_.push_back(req);
    }
    const std::string& code = req.code;
    if (code.find("import missing_mod") != std::string::npos)
        return error(runtime::kCategoryMissingModule, "ModuleNotFoundError: No module named 'missing_mod'");
    if (code.find("while True") != std::string::npos) {
        auto v = error(runtime::kCategoryTimeout, "timed out");
        v.duration_s = req.timeout_s;
        return v;
    }
    if (code.find("raise") != std::string::npos) return error(runtime::kCategoryRuntime, "ValueError: boom");

    SandboxVerdict v;
    if (req.op == runtime::SandboxOp::Exec) {
        const auto at = code.rfind("print(");
        if (at != std::string::npos) {
            const auto end = code.find(')', at);
            v.stdout_text = code.substr(at + 6, end - at - 6) + "\n";
        }
        return v;
    }
    if (code.find("BUG") != std::string::npos) {
        v.status = VerdictStatus::Fail;
        v.category = runtime::kCategoryAssertion;
        v.stderr_text = "AssertionError: " + (req.tests.empty() ? std::string() : req.tests.front());
    }
    return v;
}

std::vector<runtime::SandboxRequest> ScriptedSandbox::requests() const {
    std::lock_guard lock(mu_);
    return requests_;
}

}  // namespace wfsynth::testing
