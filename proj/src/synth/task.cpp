// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/synth/task.hpp"

#include <set>

#include "wfsynth/common/text.hpp"

namespace wfsynth::synth {

using nlohmann::json;

TaskRegistry::TaskRegistry(std::vector<TaskSpec> tasks) : tasks_(std::move(tasks)) {
    std::set<std::string> seen;
    for (const auto& t : tasks_) {
        if (t.task_id.empty()) throw DataError("task registry: empty task_id");
        if (!seen.insert(t.task_id).second) throw DataError("task registry: duplicate task_id '" + t.task_id + "'");
    }
}

TaskRegistry TaskRegistry::from_json(const json& j, const std::string& origin) {
    std::vector<TaskSpec> tasks;
    try {
        for (const auto& jt : j.at("tasks")) {
            TaskSpec t;
            t.task_id = jt.at("task_id").get<std::string>();
            t.description = jt.at("description").get<std::string>();
            const std::string kind = jt.at("task_kind").get<std::string>();
            const auto k = ir::task_kind_from_string(kind);
            if (!k) throw DataError(origin + ": task '" + t.task_id + "' has unknown task_kind '" + kind + "'");
            t.task_kind = *k;
            t.domain_tag = ir::domain_of(*k);
            if (jt.contains("domain_tag")) {
                const std::string dom = jt["domain_tag"].get<std::string>();
                const auto d = ir::domain_from_string(dom);
                if (!d) throw DataError(origin + ": task '" + t.task_id + "' has unknown domain_tag '" + dom + "'");
                t.domain_tag = *d;
            }
            tasks.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw DataError(origin + ": malformed task registry: " + e.what());
    }
    return TaskRegistry(std::move(tasks));
}

TaskRegistry TaskRegistry::load(const std::string& path) {
    try {
        return from_json(json::parse(text::read_file(path)), path);
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

json TaskRegistry::to_json() const {
    json arr = json::array();
    for (const auto& t : tasks_)
        arr.push_back({{"task_id", t.task_id},
                       {"description", t.description},
                       {"task_kind", std::string(ir::to_string(t.task_kind))},
                       {"domain_tag", std::string(ir::to_string(t.domain_tag))}});
    return {{"tasks", std::move(arr)}};
}

const TaskSpec* TaskRegistry::find(const std::string& id) const {
    for (const auto& t : tasks_)
        if (t.task_id == id) return &t;
    return nullptr;
}

const TaskSpec& TaskRegistry::at(const std::string& id) const {
    if (const auto* t = find(id)) return *t;
    throw DataError("unknown task '" + id + "'");
}

std::size_t default_k(ir::TaskKind kind) {
    switch (kind) {
        case ir::TaskKind::MathNumeric: return 1;
        case ir::TaskKind::MathBoxed: return 4;
        case ir::TaskKind::MultipleChoice: return 1;
        case ir::TaskKind::Code: return 2;
        case ir::TaskKind::Qa: return 2;
    }
    return 1;
}

}  // namespace wfsynth::synth
