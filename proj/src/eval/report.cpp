// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/eval/report.hpp"

#include <set>

namespace wfsynth::eval {

using nlohmann::json;

json AccuracyReport::to_json() const {
    json inst = json::array();
    for (const auto& s : instances) {
        inst.push_back({{"instance_id", s.instance_id},
                        {"correct", s.correct},
                        {"normalized_pred", s.normalized_pred},
                        {"normalized_gold", s.normalized_gold},
                        {"contract_compliant", s.contract_compliant},
                        {"category", s.category ? json(exec::to_string(*s.category)) : json(nullptr)}});
    }
    json j = {{"task", task_id},
              {"workflow", workflow},
              {"scorer", std::string(eval::to_string(scorer))},
              {"attempted", attempted},
              {"correct", correct},
              {"contract_compliant", contract_compliant},
              {"no_data", no_data()},
              {"errors", errors},
              {"missing_ids", missing_ids},
              {"data_errors", data_errors},
              {"cost_nanos", cost_nanos},
              {"instances", std::move(inst)}};
    j["accuracy"] = accuracy ? json(*accuracy) : json(nullptr);
    j["accuracy_env_excluded"] = accuracy_env_excluded ? json(*accuracy_env_excluded) : json(nullptr);
    return j;
}

AccuracyReport evaluate(const std::vector<exec::RunResult>& results, const Dataset& dataset,
                        const std::string& workflow, runtime::Sandbox* sandbox, const ScoreOptions& opts) {
    AccuracyReport rep;
    rep.task_id = dataset.task_id;
    rep.workflow = workflow;
    rep.scorer = dataset.scorer;
    for (const auto& e : dataset.errors) rep.data_errors.push_back(e.message);

    std::set<std::string> seen;
    for (const auto& r : results) {
        const exec::TaskInstance* inst = dataset.find(r.instance_id);
        if (!inst) {
            rep.data_errors.push_back("result for unknown instance '" + r.instance_id + "'");
            continue;
        }
        seen.insert(r.instance_id);
        ++rep.attempted;
        rep.cost_nanos += r.cost.nanos();
        InstanceScore s;
        s.instance_id = r.instance_id;
        if (r.error_category) {
            s.category = r.error_category;
        } else {
            const ScoreResult sr = score(dataset.scorer, r.final_output, inst->gold, sandbox, inst, opts);
            s.correct = sr.correct;
            s.normalized_pred = sr.normalized_pred;
            s.normalized_gold = sr.normalized_gold;
            s.contract_compliant = sr.contract_compliant;
            if (!sr.correct) s.category = sr.category.value_or(exec::ErrorCategory::Model);
        }
        if (s.correct) ++rep.correct;
        if (s.contract_compliant) ++rep.contract_compliant;
        if (s.category) ++rep.errors[exec::to_string(*s.category)];
        rep.instances.push_back(std::move(s));
    }
    for (const auto& i : dataset.instances)
        if (!seen.count(i.instance_id)) rep.missing_ids.push_back(i.instance_id);

    if (rep.attempted > 0) {
        rep.accuracy = static_cast<double>(rep.correct) / static_cast<double>(rep.attempted);
        const std::size_t denom = rep.attempted - rep.errors["env"];
        if (denom > 0) rep.accuracy_env_excluded = static_cast<double>(rep.correct) / static_cast<double>(denom);
    }
    return rep;
}

}  // namespace wfsynth::eval
