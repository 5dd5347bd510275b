// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::ir {

/// One scheduled step. Pointers refer into the program the plan was built
/// from, which must outlive the plan.
struct PlanStep {
    enum class Kind { Node, Repeat, Branch };

    Kind kind = Kind::Node;
    const NodeSpec* node = nullptr;         // Kind::Node
    int repeat_count = 0;                   // Kind::Repeat
    std::vector<const NodeSpec*> body;      // Kind::Repeat, dependency-ordered
    const BranchBlock* branch = nullptr;    // Kind::Branch
};

struct ExecutionPlan {
    std::vector<PlanStep> steps;
};

/// Orders statements so every node follows the nodes it binds from. Branches
/// are barriers: nothing moves across them. Ties keep declaration order.
/// Throws CycleError on cyclic bindings and SchemaError when a node binds to
/// one declared after a later branch.
ExecutionPlan build_plan(const WorkflowProgram& program);

/// Declared node ids in execution order; repeat bodies are contiguous runs.
std::vector<std::string> topo_order(const WorkflowProgram& program);

}  // namespace wfsynth::ir
