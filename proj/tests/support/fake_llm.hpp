// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic stand-ins for the chat-completion endpoint.

#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "wfsynth/gateway/transport.hpp"

namespace wfsynth::testing {

/// Marker planted in everything derived from `task`: its trajectory
/// workflows, its error logs and the reflections distilled from them.
std::string sentinel(const std::string& task);

/// Token estimate used by every fake: one token per four bytes, rounded up.
std::int64_t fake_tokens(const std::string& s);

/// Transport whose replies come from a function. Failures can be queued to
/// exercise retry handling.
class FakeLlm : public gateway::Transport {
public:
    using Responder = std::function<std::string(const std::vector<gateway::Message>&, const gateway::SamplingConfig&)>;

    explicit FakeLlm(Responder responder);

    gateway::TransportReply send(const std::vector<gateway::Message>& messages,
                                 const gateway::SamplingConfig& cfg) override;

    /// The next `count` sends throw TransportError(retryable).
    void fail_next(int count, bool retryable);
    std::size_t calls() const { return calls_.load(); }
    std::size_t max_concurrent() const { return max_concurrent_.load(); }

private:
    Responder responder_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<int> active_{0};
    std::atomic<std::size_t> max_concurrent_{0};
    std::mutex mu_;
    std::deque<bool> failures_;
};

/// What the fake model "knows" about one problem.
struct KnownAnswer {
    std::string answer;      // reply for reasoning and extraction prompts
    std::string code;        // first code attempt (code tasks)
    std::string fixed_code;  // reply to a "Fix the code" instruction
};

/// Rule-based responder that recognises every prompt family the pipeline
/// sends: reflection, synthesis meta-prompts, and each operator's prompt.
class WorldModel {
public:
    /// `answers` is keyed by problem text; a prompt that contains the problem
    /// gets that answer.
    explicit WorldModel(std::map<std::string, KnownAnswer> answers) : answers_(std::move(answers)) {}

    std::string respond(const std::vector<gateway::Message>& messages, const gateway::SamplingConfig& cfg) const;

    /// Workflow the model writes for a target of the given kind.
    static std::string workflow_for(const std::string& name, const std::string& kind);

    FakeLlm::Responder responder() const {
        return [this](const auto& m, const auto& c) { return respond(m, c); };
    }

private:
    const KnownAnswer* lookup(const std::string& prompt) const;
    std::string reflect(const std::vector<gateway::Message>& messages) const;
    std::string synthesize(const std::string& prompt) const;
    std::string custom(const std::string& prompt) const;

    std::map<std::string, KnownAnswer> answers_;
};

}  // namespace wfsynth::testing
