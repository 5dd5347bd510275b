// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// The synthesis input. Sections are rendered in a fixed order:
//   1. Operator Library   2. Compositional Heuristics   3. Output Contracts
//   4. Demonstrations     5. Target Task
// An empty section keeps its header and renders "(none)".

#pragma once

#include <string>

#include "wfsynth/distill/priors.hpp"
#include "wfsynth/ir/operator_kind.hpp"
#include "wfsynth/synth/demo_pool.hpp"
#include "wfsynth/synth/task.hpp"

namespace wfsynth::synth {

struct MetaPrompt {
    std::string operator_section;
    std::string heuristics_section;
    std::string contracts_section;
    std::string demos_section;
    std::string target_section;
    std::string rendered;

    std::string hash() const;
};

struct PromptOptions {
    bool drop_heuristics = false;
    bool drop_contracts = false;
};

/// Short description of the workflow language given to the generator.
std::string grammar_summary();

/// Entries usable for `target` under leave-one-out: everything except entries
/// distilled only from the target itself.
std::vector<const distill::PriorEntry*> loo_entries(const distill::PriorSet& priors, distill::PriorKind kind,
                                                    const std::string& target);

/// A contract is relevant when one of its source tasks shares the target's domain.
bool contract_relevant(const distill::PriorEntry& contract, const TaskSpec& target, const TaskRegistry& registry);

MetaPrompt compose_meta_prompt(const TaskSpec& target, const DemoPool& pool, const distill::PriorSet& priors,
                               const TaskRegistry& registry, const PromptOptions& options = {},
                               const ir::OperatorRegistry& ops = ir::OperatorRegistry::builtin());

}  // namespace wfsynth::synth
