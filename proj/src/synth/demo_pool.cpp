// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/synth/demo_pool.hpp"

#include <algorithm>
#include <filesystem>

#include "wfsynth/distill/trajectory.hpp"
#include "wfsynth/ir/parser.hpp"
#include "wfsynth/ir/serializer.hpp"

namespace wfsynth::synth {

DemoCatalog build_demo_catalog(const TaskRegistry& registry, const std::string& trajectories_dir,
                               const std::string& exclude_task, const ir::OperatorRegistry& ops) {
    DemoCatalog catalog;
    for (const auto& task : registry.tasks()) {
        if (task.task_id == exclude_task) continue;
        if (!std::filesystem::exists(distill::trajectory_path(trajectories_dir, task.task_id))) continue;
        SourceDemos src{task.task_id, task.domain_tag, {}};
        for (const auto& rec : distill::load_trajectory(trajectories_dir, task.task_id)) {
            try {
                const auto program = ir::parse_workflow(rec.workflow_dsl, ops);
                src.ranked.push_back({task.task_id, task.domain_tag, ir::serialize_workflow(program), rec.accuracy});
            } catch (const Error&) {
                // Unparseable historical workflows are not usable as demonstrations.
            }
        }
        std::stable_sort(src.ranked.begin(), src.ranked.end(),
                         [](const Demo& a, const Demo& b) { return a.accuracy > b.accuracy; });
        if (!src.ranked.empty()) catalog.push_back(std::move(src));
    }
    return catalog;
}

DemoPool build_demo_pool(const TaskSpec& target, const DemoCatalog& catalog, std::size_t k) {
    std::vector<const SourceDemos*> sources;
    for (const auto& s : catalog)
        if (s.task_id != target.task_id && !s.ranked.empty()) sources.push_back(&s);
    if (sources.empty()) throw EmptyPoolError(target.task_id);
    std::stable_sort(sources.begin(), sources.end(), [](const SourceDemos* a, const SourceDemos* b) {
        return a->ranked.front().accuracy > b->ranked.front().accuracy;
    });

    DemoPool pool{target.task_id, k, {}};
    for (std::size_t round = 0; pool.demos.size() < k; ++round) {
        bool any = false;
        for (const auto* s : sources) {
            if (round >= s->ranked.size()) continue;
            any = true;
            pool.demos.push_back(s->ranked[round]);
            if (pool.demos.size() == k) break;
        }
        if (!any) break;
    }
    std::stable_sort(pool.demos.begin(), pool.demos.end(),
                     [](const Demo& a, const Demo& b) { return a.accuracy > b.accuracy; });
    return pool;
}

}  // namespace wfsynth::synth
