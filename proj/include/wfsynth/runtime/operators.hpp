// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Interpreters for the six built-in operator kinds. Each takes fully resolved
// inputs and returns exactly the kind's output fields.

#pragma once

#include <string>
#include <vector>

#include "wfsynth/gateway/gateway.hpp"
#include "wfsynth/ir/operator_kind.hpp"
#include "wfsynth/runtime/sandbox.hpp"
#include "wfsynth/runtime/value.hpp"

namespace wfsynth::runtime {

struct OperatorCall {
    std::string node_id;
    ir::OperatorKind kind = ir::OperatorKind::Custom;
    ValueMap inputs;
    gateway::SamplingConfig sampling;
};

struct SandboxCall {
    SandboxRequest request;
    SandboxVerdict verdict;
};

struct OperatorResult {
    ValueMap fields;
    std::vector<gateway::GatewayExchange> exchanges;
    std::vector<SandboxCall> sandbox_calls;
    gateway::Money cost_delta;
    std::vector<std::string> warnings;
};

/// Everything an operator may touch besides its inputs.
struct OperatorContext {
    gateway::Gateway* gateway = nullptr;
    Sandbox* sandbox = nullptr;
    std::vector<std::string> tests;  // unit tests for the current instance (Test only)
    double sandbox_timeout_s = 10.0;
};

class EmptyEnsembleError : public Error {
public:
    EmptyEnsembleError() : Error("ScEnsemble received an empty solution list") {}
};

OperatorResult run_custom(const OperatorCall& call, gateway::Gateway& gw);
OperatorResult run_answer_generate(const OperatorCall& call, gateway::Gateway& gw);
OperatorResult run_programmer(const OperatorCall& call, gateway::Gateway& gw, Sandbox& sandbox,
                              double timeout_s);
OperatorResult run_custom_code_generate(const OperatorCall& call, gateway::Gateway& gw);
OperatorResult run_sc_ensemble(const OperatorCall& call);
/// `sandbox` may be null only when `tests` is empty (vacuous pass).
OperatorResult run_test(const OperatorCall& call, Sandbox* sandbox, const std::vector<std::string>& tests,
                        double timeout_s);

/// Dispatches on `call.kind`. Throws ConfigError when the context lacks a
/// gateway or sandbox the kind needs.
OperatorResult run_operator(const OperatorCall& call, OperatorContext& ctx);
/// Same, filling `out` as it goes: when an operator throws, `out` still holds
/// the exchanges, sandbox calls and cost incurred before the failure.
void run_operator_into(const OperatorCall& call, OperatorContext& ctx, OperatorResult& out);

// Prompt builders and completion parsers, exposed for tests and fixtures.
std::string custom_prompt(const std::string& instruction, const std::string& input);
std::string answer_generate_prompt(const std::string& input);
std::string programmer_prompt(const std::string& problem);
std::string code_generate_prompt(const std::string& problem, const std::string& entry_point,
                                 const std::string& instruction);

struct ThoughtAnswer {
    std::string thought;
    std::string answer;
};
/// Splits "THOUGHT: ... ANSWER: ..." output; the last ANSWER marker wins.
ThoughtAnswer parse_thought_answer(const std::string& completion);

/// Voting normal form: trimmed, lower-cased, internal whitespace collapsed,
/// trailing . , ; : ! ? removed.
std::string normalize_vote(const std::string& s);
/// Index of the plurality winner over normalized values; ties go to the value
/// whose first occurrence is earliest. Throws EmptyEnsembleError.
std::size_t majority_index(const std::vector<std::string>& solutions);

}  // namespace wfsynth::runtime
