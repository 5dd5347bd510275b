// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Demonstration workflows drawn from source tasks, never from the target.

#pragma once

#include <string>
#include <vector>

#include "wfsynth/common/errors.hpp"
#include "wfsynth/ir/operator_kind.hpp"
#include "wfsynth/synth/task.hpp"

namespace wfsynth::synth {

struct Demo {
    std::string source_task;
    ir::Domain domain = ir::Domain::Math;
    std::string dsl_text;  // canonical form
    double accuracy = 0.0;

    friend bool operator==(const Demo&, const Demo&) = default;
};

/// Every usable workflow of one source task, best first (earliest record on ties).
struct SourceDemos {
    std::string task_id;
    ir::Domain domain = ir::Domain::Math;
    std::vector<Demo> ranked;
};

/// Candidate demos of every task except `exclude_task`, in registry order.
/// Tasks without a trajectory file are skipped; records whose workflow does
/// not parse are skipped.
using DemoCatalog = std::vector<SourceDemos>;

DemoCatalog build_demo_catalog(const TaskRegistry& registry, const std::string& trajectories_dir,
                               const std::string& exclude_task,
                               const ir::OperatorRegistry& ops = ir::OperatorRegistry::builtin());

struct DemoPool {
    std::string target;
    std::size_t k = 0;
    std::vector<Demo> demos;  // accuracy descending

    friend bool operator==(const DemoPool&, const DemoPool&) = default;
};

class EmptyPoolError : public DataError {
public:
    explicit EmptyPoolError(const std::string& target)
        : DataError("no source task with usable workflows for target '" + target + "'") {}
};

/// Picks k demos round-robin: each source's best first (sources ordered by
/// that accuracy), then each source's second best, and so on.
DemoPool build_demo_pool(const TaskSpec& target, const DemoCatalog& catalog, std::size_t k);

}  // namespace wfsynth::synth
