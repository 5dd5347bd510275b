// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Interprets a validated workflow over task instances.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/gateway/cost_ledger.hpp"
#include "wfsynth/gateway/gateway.hpp"
#include "wfsynth/ir/program.hpp"
#include "wfsynth/runtime/sandbox.hpp"
#include "wfsynth/runtime/value.hpp"

namespace wfsynth::exec {

struct TaskInstance {
    std::string instance_id;
    std::string problem;
    nlohmann::json gold;                     // scorer-specific answer payload
    std::optional<std::string> entry_point;  // code tasks
    std::vector<std::string> tests;          // code tasks
};

/// Who is to blame for a failed instance. The engine assigns env and
/// workflow; model (a wrong but well-formed answer) is assigned by scoring.
enum class ErrorCategory { Model, Workflow, Env };

std::string to_string(ErrorCategory c);
std::optional<ErrorCategory> error_category_from_string(const std::string& s);

struct NodeTrace {
    std::string node_id;
    int iteration = 0;
    std::string kind;
    runtime::ValueMap fields;
    std::vector<gateway::ChargeEntry> charges;  // one per charged gateway exchange
    std::size_t sandbox_calls = 0;
    gateway::Money cost;
    std::vector<std::string> warnings;
    std::optional<std::string> error;
    std::string error_raw;  // verbatim completion for format failures

    nlohmann::json to_json() const;
};

struct RunResult {
    std::string instance_id;
    std::string final_output;
    std::vector<NodeTrace> node_trace;
    gateway::Money cost;
    std::optional<ErrorCategory> error_category;
    std::string error;
    double wall_s = 0.0;  // excluded from to_json so reports stay reproducible

    /// Charges of every node, in trace order.
    gateway::CostLedger ledger(const gateway::Pricing& pricing) const;
    nlohmann::json to_json() const;
    static RunResult from_json(const nlohmann::json& j);
};

struct ExecLimits {
    std::size_t node_budget = 64;       // operator executions per instance
    double node_timeout_s = 120.0;      // wall-clock per node
    double sandbox_timeout_s = 10.0;    // per sandbox request (capped by node_timeout_s)
};

/// The instance ran more operator nodes than the budget allows.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::size_t budget)
        : Error("node budget of " + std::to_string(budget) + " exhausted") {}
};

/// Engine-level refusal of a code workflow that returns an ScEnsemble output.
class GuardViolation : public Error {
public:
    using Error::Error;
};

struct EngineContext {
    gateway::Gateway* gateway = nullptr;
    runtime::Sandbox* sandbox = nullptr;
    gateway::SamplingConfig sampling;
    ExecLimits limits;
};

/// Runs one instance. Never throws for per-instance failures: they are
/// reported through `error_category` and the failing node's trace entry.
RunResult execute_instance(const ir::WorkflowProgram& w, const TaskInstance& inst, const EngineContext& ctx);

struct DatasetRun {
    std::vector<RunResult> results;  // sorted by instance_id
    gateway::CostLedger ledger;      // built in result order
};

DatasetRun execute_dataset(const ir::WorkflowProgram& w, const std::vector<TaskInstance>& instances,
                           const EngineContext& ctx, int parallelism);

/// Writes `<runs_dir>/<task>/<workflow>/<run_name>.jsonl` (one result per line)
/// and `summary.json` next to it. Timing is included only when `wall_s` is
/// given, so replay runs can stay byte-reproducible. Returns the .jsonl path.
std::string write_run(const std::string& runs_dir, const std::string& task, const std::string& workflow,
                      const std::string& run_name, const DatasetRun& run, std::optional<double> wall_s);

/// Reads back a run file written by write_run. Throws DataError.
std::vector<RunResult> load_run(const std::string& path);

}  // namespace wfsynth::exec
