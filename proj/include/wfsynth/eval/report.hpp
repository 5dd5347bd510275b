// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/eval/dataset.hpp"
#include "wfsynth/eval/scorer.hpp"
#include "wfsynth/exec/engine.hpp"

namespace wfsynth::eval {

struct InstanceScore {
    std::string instance_id;
    bool correct = false;
    std::string normalized_pred;
    std::string normalized_gold;
    bool contract_compliant = false;
    std::optional<exec::ErrorCategory> category;  // null when correct
};

struct AccuracyReport {
    std::string task_id;
    std::string workflow;
    ScorerKind scorer = ScorerKind::NumericExact;
    std::size_t attempted = 0;
    std::size_t correct = 0;
    std::size_t contract_compliant = 0;
    std::optional<double> accuracy;               // correct / attempted; null with no data
    std::optional<double> accuracy_env_excluded;  // correct / (attempted - env)
    std::map<std::string, std::size_t> errors{{"model", 0}, {"workflow", 0}, {"env", 0}};
    std::vector<std::string> missing_ids;   // dataset records with no result
    std::vector<std::string> data_errors;   // bad dataset records and unknown result ids
    std::int64_t cost_nanos = 0;
    std::vector<InstanceScore> instances;   // in result order

    bool no_data() const { return attempted == 0; }
    nlohmann::json to_json() const;
};

/// Scores every result against its dataset record. Engine-detected failures
/// keep their category; a well-formed wrong answer is a model error.
AccuracyReport evaluate(const std::vector<exec::RunResult>& results, const Dataset& dataset,
                        const std::string& workflow, runtime::Sandbox* sandbox = nullptr,
                        const ScoreOptions& opts = {});

}  // namespace wfsynth::eval
