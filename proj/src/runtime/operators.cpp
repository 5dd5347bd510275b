// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/runtime/operators.hpp"

#include <cctype>
#include <map>

#include "wfsynth/common/text.hpp"

namespace wfsynth::runtime {

using gateway::GatewayError;
using gateway::Message;

namespace {

const std::string& text_input(const OperatorCall& call, const std::string& slot) {
    const auto it = call.inputs.find(slot);
    if (it == call.inputs.end()) throw std::invalid_argument(call.node_id + ": missing input '" + slot + "'");
    return as_text(it->second, call.node_id + "." + slot);
}

std::string optional_text(const OperatorCall& call, const std::string& slot) {
    const auto it = call.inputs.find(slot);
    return it == call.inputs.end() ? std::string() : as_text(it->second, call.node_id + "." + slot);
}

/// One gateway completion, recorded into `result` with its cost.
std::string complete(const OperatorCall& call, gateway::Gateway& gw, const std::string& prompt,
                     OperatorResult& result) {
    try {
        auto ex = gw.complete({Message{"user", prompt}}, call.sampling);
        result.cost_delta += gw.pricing().cost(ex.tokens_in, ex.tokens_out);
        std::string response = ex.response;
        result.exchanges.push_back(std::move(ex));
        return response;
    } catch (GatewayError& e) {
        e.set_node_id(call.node_id);
        throw;
    }
}

std::string rtrim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

SandboxVerdict run_sandbox(Sandbox& sandbox, const SandboxRequest& req, OperatorResult& result) {
    SandboxVerdict v = sandbox.run(req);
    result.sandbox_calls.push_back({req, v});
    if (v.category && is_env_category(*v.category)) {
        throw SandboxError(*v.category, text::trim(v.stderr_text.empty() ? v.stdout_text : v.stderr_text));
    }
    return v;
}

std::string failure_transcript(const SandboxVerdict& v) {
    std::string out = "[" + v.category.value_or("fail") + "]";
    const std::string err = text::trim(v.stderr_text);
    const std::string std_out = text::trim(v.stdout_text);
    if (!err.empty()) out += "\n" + err;
    if (!std_out.empty()) out += "\n" + std_out;
    return out;
}

}  // namespace

std::string custom_prompt(const std::string& instruction, const std::string& input) {
    return "### Instruction\n" + instruction + "\n\n### Input\n" + input;
}

std::string answer_generate_prompt(const std::string& input) {
    return "Think step by step, then give the final answer.\n"
           "Reply in exactly this format:\n"
           "THOUGHT: <your reasoning>\n"
           "ANSWER: <final answer only>\n\n"
           "### Question\n" +
           input;
}

std::string programmer_prompt(const std::string& problem) {
    return "Write a self-contained Python program that solves the problem below and prints the final "
           "answer to stdout. Return the program in one ```python fenced block.\n\n"
           "### Problem\n" +
           problem;
}

std::string code_generate_prompt(const std::string& problem, const std::string& entry_point,
                                 const std::string& instruction) {
    std::string p = "Write a Python function named `" + entry_point +
                    "` that solves the problem below. Return the complete code in one ```python fenced "
                    "block.\n\n";
    if (!instruction.empty()) p += "### Instruction\n" + instruction + "\n\n";
    return p + "### Problem\n" + problem;
}

ThoughtAnswer parse_thought_answer(const std::string& completion) {
    static const std::string kAnswer = "ANSWER:";
    static const std::string kThought = "THOUGHT:";
    const auto a = completion.rfind(kAnswer);
    if (a == std::string::npos) throw FormatError("completion has no ANSWER: section", completion);
    ThoughtAnswer out;
    out.answer = text::trim(std::string_view(completion).substr(a + kAnswer.size()));
    const auto t = completion.find(kThought);
    const std::size_t t_begin = (t != std::string::npos && t < a) ? t + kThought.size() : 0;
    out.thought = text::trim(std::string_view(completion).substr(t_begin, a - t_begin));
    return out;
}

std::string normalize_vote(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (const char c : text::trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    while (!out.empty()) {
        const char c = out.back();
        if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == ' ') out.pop_back();
        else break;
    }
    return out;
}

std::size_t majority_index(const std::vector<std::string>& solutions) {
    if (solutions.empty()) throw EmptyEnsembleError();
    std::map<std::string, std::pair<int, std::size_t>> tally;  // normal form -> (votes, first index)
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        auto [it, fresh] = tally.try_emplace(normalize_vote(solutions[i]), 0, i);
        ++it->second.first;
    }
    std::size_t best = 0;
    int best_votes = 0;
    for (const auto& [norm, entry] : tally) {
        const auto [votes, first] = entry;
        if (votes > best_votes || (votes == best_votes && first < best)) {
            best_votes = votes;
            best = first;
        }
    }
    return best;
}

static void fill_custom(const OperatorCall& call, gateway::Gateway& gw, OperatorResult& r) {
    const std::string response =
        complete(call, gw, custom_prompt(optional_text(call, "instruction"), text_input(call, "input")), r);
    r.fields["response"] = response;
}

OperatorResult run_custom(const OperatorCall& call, gateway::Gateway& gw) {
    OperatorResult r;
    fill_custom(call, gw, r);
    return r;
}

static void fill_answer_generate(const OperatorCall& call, gateway::Gateway& gw, OperatorResult& r) {
    const std::string completion = complete(call, gw, answer_generate_prompt(text_input(call, "input")), r);
    const ThoughtAnswer ta = parse_thought_answer(completion);
    r.fields["thought"] = ta.thought;
    r.fields["answer"] = ta.answer;
}

OperatorResult run_answer_generate(const OperatorCall& call, gateway::Gateway& gw) {
    OperatorResult r;
    fill_answer_generate(call, gw, r);
    return r;
}

static void fill_programmer(const OperatorCall& call, gateway::Gateway& gw, Sandbox& sandbox,
                              double timeout_s, OperatorResult& r) {
    const std::string completion = complete(call, gw, programmer_prompt(text_input(call, "problem")), r);
    const auto code = text::last_fenced_block(completion);
    if (!code) throw FormatError("completion has no fenced code block", completion);

    SandboxRequest req;
    req.op = SandboxOp::Exec;
    req.code = *code;
    req.timeout_s = timeout_s;
    const SandboxVerdict v = run_sandbox(sandbox, req, r);
    r.fields["code"] = *code;
    // Runtime exceptions and timeouts are data for downstream nodes.
    r.fields["output"] = v.status == VerdictStatus::Pass ? rtrim(v.stdout_text) : failure_transcript(v);
}

OperatorResult run_programmer(const OperatorCall& call, gateway::Gateway& gw, Sandbox& sandbox,
                              double timeout_s) {
    OperatorResult r;
    fill_programmer(call, gw, sandbox, timeout_s, r);
    return r;
}

static void fill_custom_code_generate(const OperatorCall& call, gateway::Gateway& gw, OperatorResult& r) {
    const std::string& entry = text_input(call, "entry_point");
    const std::string completion = complete(
        call, gw, code_generate_prompt(text_input(call, "problem"), entry, optional_text(call, "instruction")), r);
    const std::string code = text::last_fenced_block(completion).value_or(text::trim(completion));
    if (!text::contains_word(code, entry))
        throw FormatError("generated code does not define entry point '" + entry + "'", completion);
    r.fields["response"] = code;
}

OperatorResult run_custom_code_generate(const OperatorCall& call, gateway::Gateway& gw) {
    OperatorResult r;
    fill_custom_code_generate(call, gw, r);
    return r;
}

static void fill_sc_ensemble(const OperatorCall& call, OperatorResult& r) {
    const auto it = call.inputs.find("solutions");
    if (it == call.inputs.end()) throw EmptyEnsembleError();
    const auto& solutions = as_list(it->second, call.node_id + ".solutions");
    r.fields["response"] = solutions[majority_index(solutions)];
}

OperatorResult run_sc_ensemble(const OperatorCall& call) {
    OperatorResult r;
    fill_sc_ensemble(call, r);
    return r;
}

static void fill_test(const OperatorCall& call, Sandbox* sandbox, const std::vector<std::string>& tests,
                        double timeout_s, OperatorResult& r) {
    const std::string& solution = text_input(call, "solution");
    if (tests.empty()) {
        r.warnings.push_back(call.node_id + ": no test cases; vacuous pass");
        r.fields["result"] = true;
        r.fields["solution"] = solution;
        return;
    }
    if (!sandbox) throw ConfigError(call.node_id + ": Test needs a sandbox");
    SandboxRequest req;
    req.op = SandboxOp::Test;
    req.code = solution;
    req.entry_point = text_input(call, "entry_point");
    req.tests = tests;
    req.timeout_s = timeout_s;
    const SandboxVerdict v = run_sandbox(*sandbox, req, r);
    const bool pass = v.status == VerdictStatus::Pass;
    r.fields["result"] = pass;
    r.fields["solution"] = pass ? solution : failure_transcript(v);
}

OperatorResult run_test(const OperatorCall& call, Sandbox* sandbox, const std::vector<std::string>& tests,
                        double timeout_s) {
    OperatorResult r;
    fill_test(call, sandbox, tests, timeout_s, r);
    return r;
}

void run_operator_into(const OperatorCall& call, OperatorContext& ctx, OperatorResult& out) {
    using ir::OperatorKind;
    auto need_gateway = [&]() -> gateway::Gateway& {
        if (!ctx.gateway) throw ConfigError(call.node_id + ": operator needs a gateway");
        return *ctx.gateway;
    };
    auto need_sandbox = [&]() -> Sandbox& {
        if (!ctx.sandbox) throw ConfigError(call.node_id + ": operator needs a sandbox");
        return *ctx.sandbox;
    };
    switch (call.kind) {
        case OperatorKind::Custom: return fill_custom(call, need_gateway(), out);
        case OperatorKind::AnswerGenerate: return fill_answer_generate(call, need_gateway(), out);
        case OperatorKind::Programmer:
            return fill_programmer(call, need_gateway(), need_sandbox(), ctx.sandbox_timeout_s, out);
        case OperatorKind::CustomCodeGenerate: return fill_custom_code_generate(call, need_gateway(), out);
        case OperatorKind::ScEnsemble: return fill_sc_ensemble(call, out);
        case OperatorKind::Test: return fill_test(call, ctx.sandbox, ctx.tests, ctx.sandbox_timeout_s, out);
    }
    throw std::logic_error("unhandled operator kind");
}

OperatorResult run_operator(const OperatorCall& call, OperatorContext& ctx) {
    OperatorResult r;
    run_operator_into(call, ctx, r);
    return r;
}

}  // namespace wfsynth::runtime
