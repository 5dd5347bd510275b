// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-pass workflow generation. The only second call ever made is one
// mechanical re-prompt when the reply contains no workflow block at all.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/gateway/gateway.hpp"
#include "wfsynth/ir/program.hpp"
#include "wfsynth/synth/intervention.hpp"
#include "wfsynth/synth/meta_prompt.hpp"

namespace wfsynth::synth {

/// The generator's reply could not be turned into a valid program.
class SynthesisParseError : public Error {
public:
    SynthesisParseError(const std::string& msg, std::string raw) : Error(msg), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

struct SynthesisResult {
    ir::WorkflowProgram program;
    std::string dsl;                      // canonical text
    std::vector<std::string> warnings;    // contract and guard findings
    std::vector<std::string> fingerprints;
    std::string prompt_hash;
    bool reprompted = false;
};

/// Locates the workflow text in a reply: the last ```wf block, else the last
/// fenced block starting with `workflow`, else the whole reply when it starts
/// with `workflow`.
std::optional<std::string> extract_workflow_block(const std::string& reply);

std::string reprompt_message();

/// Temperature is forced to 0 regardless of `sampling`.
SynthesisResult synthesize_workflow(const TaskSpec& target, const MetaPrompt& prompt, gateway::Gateway& gw,
                                    gateway::SamplingConfig sampling,
                                    const ir::OperatorRegistry& ops = ir::OperatorRegistry::builtin());

struct SynthesisMeta {
    std::string target;
    Intervention intervention;
    std::size_t k = 0;
    bool drop_heuristics = false;
    bool drop_contracts = false;
};

/// Writes `<out_dir>/<target>/<name>.wf` and `synthesis_meta.json`; returns the .wf path.
std::string write_synthesis(const std::string& out_dir, const SynthesisResult& result, const SynthesisMeta& meta);

}  // namespace wfsynth::synth
