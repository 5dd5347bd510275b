// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/synth/meta_prompt.hpp"

#include <sstream>

#include "wfsynth/common/hash.hpp"

namespace wfsynth::synth {

using distill::PriorEntry;
using distill::PriorKind;

namespace {

std::string section(int index, const std::string& title, const std::string& body) {
    return "## " + std::to_string(index) + ". " + title + "\n" + (body.empty() ? "(none)\n" : body);
}

std::string bullet_list(const std::vector<const PriorEntry*>& entries) {
    std::string out;
    for (const auto* e : entries) out += "- " + e->text + "\n";
    return out;
}

std::string format_accuracy(double a) {
    std::ostringstream os;
    os.precision(3);
    os << a;
    return os.str();
}

}  // namespace

std::string MetaPrompt::hash() const { return sha256_hex(rendered); }

std::string grammar_summary() {
    return "Workflows are written in a small line-oriented language:\n"
           "  workflow <name>\n"
           "  kind <math-numeric|math-boxed|multiple-choice|code|qa>\n"
           "  contract \"<output constraint appended to the final node's instruction>\"   (required for math kinds)\n"
           "  node <id> = <Operator> { <slot> = <value> ... }\n"
           "  repeat <n> { <nodes> }                 (n <= 8; refer to all copies as id[*].field)\n"
           "  branch <id>.result { return <id>.<field> }   (early return when a Test passes)\n"
           "  return <id>.<field>                    (exactly one, last)\n"
           "Values: task.problem, task.entry_point, <id>.<field>, \"text with ${<id>.<field>}\", or a list\n"
           "[a, b, c[*].response] (lists only for ScEnsemble.solutions). Nodes may only use earlier nodes.\n";
}

std::vector<const PriorEntry*> loo_entries(const distill::PriorSet& priors, PriorKind kind,
                                           const std::string& target) {
    std::vector<const PriorEntry*> out;
    for (const auto* e : priors.of_kind(kind)) {
        if (e->provenance.size() == 1 && *e->provenance.begin() == target) continue;
        out.push_back(e);
    }
    return out;
}

bool contract_relevant(const PriorEntry& contract, const TaskSpec& target, const TaskRegistry& registry) {
    for (const auto& src : contract.provenance) {
        const TaskSpec* t = registry.find(src);
        if (t && t->task_id != target.task_id && t->domain_tag == target.domain_tag) return true;
    }
    return false;
}

MetaPrompt compose_meta_prompt(const TaskSpec& target, const DemoPool& pool, const distill::PriorSet& priors,
                               const TaskRegistry& registry, const PromptOptions& options,
                               const ir::OperatorRegistry& ops) {
    MetaPrompt p;

    std::string ops_body;
    for (const auto& s : ops.schemas()) {
        ops_body += "- " + s.name + "(";
        for (std::size_t i = 0; i < s.inputs.size(); ++i)
            ops_body += (i ? ", " : "") + s.inputs[i].name + ": " + std::string(ir::to_string(s.inputs[i].type));
        ops_body += ") -> {";
        for (std::size_t i = 0; i < s.outputs.size(); ++i)
            ops_body += (i ? ", " : "") + s.outputs[i].name + ": " + std::string(ir::to_string(s.outputs[i].type));
        ops_body += "}: " + s.description + "\n";
    }
    p.operator_section = section(1, "Operator Library", ops_body + "\n" + grammar_summary());

    std::vector<const PriorEntry*> heuristics;
    if (!options.drop_heuristics) heuristics = loo_entries(priors, PriorKind::Heuristic, target.task_id);
    p.heuristics_section = section(2, "Compositional Heuristics", bullet_list(heuristics));

    std::vector<const PriorEntry*> contracts;
    if (!options.drop_contracts) {
        for (const auto* e : loo_entries(priors, PriorKind::Contract, target.task_id))
            if (contract_relevant(*e, target, registry)) contracts.push_back(e);
    }
    p.contracts_section = section(3, "Output Contracts", bullet_list(contracts));

    std::string demos_body;
    for (std::size_t i = 0; i < pool.demos.size(); ++i) {
        const auto& d = pool.demos[i];
        demos_body += "### Demonstration " + std::to_string(i + 1) + " (accuracy " + format_accuracy(d.accuracy) +
                      ")\n```wf\n" + d.dsl_text;
        if (!d.dsl_text.empty() && d.dsl_text.back() != '\n') demos_body += "\n";
        demos_body += "```\n";
    }
    p.demos_section = section(4, "Demonstrations", demos_body);

    p.target_section = section(5, "Target Task",
                               "Task id: " + target.task_id + "\nKind: " + std::string(ir::to_string(target.task_kind)) +
                                   "\nDescription: " + target.description + "\n\n" +
                                   "Write one complete workflow for this task named `" + target.task_id +
                                   "` with `kind " + std::string(ir::to_string(target.task_kind)) +
                                   "`. Reply with the workflow inside a single ```wf fenced block.\n");

    p.rendered = "You design agent workflows by composing operators.\n\n" + p.operator_section + "\n" +
                 p.heuristics_section + "\n" + p.contracts_section + "\n" + p.demos_section + "\n" + p.target_section;
    return p;
}

}  // namespace wfsynth::synth
