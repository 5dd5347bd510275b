// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::ir {

enum class FindingCategory { Structural, Contract, Guard };

std::string_view to_string(FindingCategory c);

struct Finding {
    FindingCategory category;
    std::string node_id;  // empty for program-level findings
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    std::size_t count(FindingCategory c) const;
};

/// Static checks over a parsed program. Findings are data; nothing is thrown.
///  - structural: unbound slots, slot/field type mismatches, non-boolean branch
///    conditions, bounds (repeat count, retry chain length), dead nodes
///  - contract:   math-family task without a terminal contract clause, or a
///    clause attached to a terminal whose operator takes no instruction
///  - guard:      code task where ScEnsemble output reaches a return point
///    with no Test node in between
ValidationReport validate_workflow(const WorkflowProgram& program,
                                   const OperatorRegistry& registry = OperatorRegistry::builtin(),
                                   const IrLimits& limits = {});

}  // namespace wfsynth::ir
