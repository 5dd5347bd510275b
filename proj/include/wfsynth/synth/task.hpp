// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/ir/program.hpp"

namespace wfsynth::synth {

struct TaskSpec {
    std::string task_id;
    std::string description;
    ir::TaskKind task_kind = ir::TaskKind::MathNumeric;
    ir::Domain domain_tag = ir::Domain::Math;
};

/// The set of known tasks, in file order. Loaded from `tasks.json`:
/// `{"tasks": [{"task_id", "description", "task_kind", "domain_tag"}, ...]}`.
class TaskRegistry {
public:
    TaskRegistry() = default;
    /// Throws DataError on duplicate ids.
    explicit TaskRegistry(std::vector<TaskSpec> tasks);

    static TaskRegistry from_json(const nlohmann::json& j, const std::string& origin = "tasks.json");
    static TaskRegistry load(const std::string& path);
    nlohmann::json to_json() const;

    const std::vector<TaskSpec>& tasks() const { return tasks_; }
    const TaskSpec* find(const std::string& id) const;
    /// Throws DataError naming the unknown id.
    const TaskSpec& at(const std::string& id) const;

private:
    std::vector<TaskSpec> tasks_;
};

/// Demo count used when none is requested.
std::size_t default_k(ir::TaskKind kind);

}  // namespace wfsynth::synth
