// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/synth/synthesizer.hpp"

#include <filesystem>

#include "wfsynth/common/text.hpp"
#include "wfsynth/ir/parser.hpp"
#include "wfsynth/ir/serializer.hpp"
#include "wfsynth/ir/validator.hpp"

namespace wfsynth::synth {

using gateway::Message;
using nlohmann::json;

std::optional<std::string> extract_workflow_block(const std::string& reply) {
    if (auto wf = text::last_fenced_block(reply, "wf")) return wf;
    if (auto any = text::last_fenced_block(reply); any && text::starts_with(text::trim(*any), "workflow "))
        return any;
    const std::string t = text::trim(reply);
    if (text::starts_with(t, "workflow ")) return t + "\n";
    return std::nullopt;
}

std::string reprompt_message() {
    return "Your reply did not contain a workflow block. Reply with the complete workflow inside a single "
           "```wf fenced block and nothing else.";
}

SynthesisResult synthesize_workflow(const TaskSpec& target, const MetaPrompt& prompt, gateway::Gateway& gw,
                                    gateway::SamplingConfig sampling, const ir::OperatorRegistry& ops) {
    sampling.temperature = 0.0;
    SynthesisResult result;
    result.prompt_hash = prompt.hash();

    std::vector<Message> messages{{"user", prompt.rendered}};
    auto ex = gw.complete(messages, sampling);
    result.fingerprints.push_back(ex.fingerprint);
    std::optional<std::string> block = extract_workflow_block(ex.response);
    std::string raw = ex.response;
    if (!block) {
        messages.push_back({"assistant", ex.response});
        messages.push_back({"user", reprompt_message()});
        ex = gw.complete(messages, sampling);
        result.fingerprints.push_back(ex.fingerprint);
        result.reprompted = true;
        raw += "\n--- re-prompt reply ---\n" + ex.response;
        block = extract_workflow_block(ex.response);
        if (!block) throw SynthesisParseError("no workflow block in the reply after one re-prompt", raw);
    }

    try {
        result.program = ir::parse_workflow(*block, ops);
    } catch (const Error& e) {
        throw SynthesisParseError(std::string("synthesized workflow does not parse: ") + e.what(), raw);
    }
    if (result.program.task_kind != target.task_kind) {
        throw SynthesisParseError("synthesized workflow declares kind " +
                                      std::string(ir::to_string(result.program.task_kind)) + " but the target is " +
                                      std::string(ir::to_string(target.task_kind)),
                                  raw);
    }
    const auto report = ir::validate_workflow(result.program, ops);
    std::string structural;
    for (const auto& f : report.findings) {
        const std::string line = "[" + std::string(ir::to_string(f.category)) + "] " +
                                 (f.node_id.empty() ? "" : f.node_id + ": ") + f.message;
        if (f.category == ir::FindingCategory::Structural) structural += "\n  " + line;
        else result.warnings.push_back(line);
    }
    if (!structural.empty()) throw SynthesisParseError("synthesized workflow is invalid:" + structural, raw);
    result.dsl = ir::serialize_workflow(result.program);
    return result;
}

std::string write_synthesis(const std::string& out_dir, const SynthesisResult& result, const SynthesisMeta& meta) {
    const std::filesystem::path dir = std::filesystem::path(out_dir) / meta.target;
    const std::string wf_path = (dir / (result.program.name + ".wf")).string();
    text::write_file(wf_path, result.dsl);
    const json j = {{"target", meta.target},
                    {"workflow", result.program.name},
                    {"prompt_hash", result.prompt_hash},
                    {"fixture_fingerprints", result.fingerprints},
                    {"reprompted", result.reprompted},
                    {"intervention", to_string(meta.intervention.mode)},
                    {"seed", meta.intervention.seed},
                    {"k", meta.k},
                    {"drop_heuristics", meta.drop_heuristics},
                    {"drop_contracts", meta.drop_contracts},
                    {"node_count", result.program.unrolled_node_count()},
                    {"warnings", result.warnings}};
    text::write_file((dir / "synthesis_meta.json").string(), j.dump(2) + "\n");
    return wf_path;
}

}  // namespace wfsynth::synth
