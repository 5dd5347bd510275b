// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/exec/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <thread>

#include "wfsynth/common/jsonl.hpp"
#include "wfsynth/common/text.hpp"
#include "wfsynth/ir/topo.hpp"
#include "wfsynth/runtime/operators.hpp"

namespace wfsynth::exec {

using gateway::Money;
using nlohmann::json;
using runtime::Value;

std::string to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Model: return "model";
        case ErrorCategory::Workflow: return "workflow";
        case ErrorCategory::Env: return "env";
    }
    return "workflow";
}

std::optional<ErrorCategory> error_category_from_string(const std::string& s) {
    if (s == "model") return ErrorCategory::Model;
    if (s == "workflow") return ErrorCategory::Workflow;
    if (s == "env") return ErrorCategory::Env;
    return std::nullopt;
}

json NodeTrace::to_json() const {
    json charges_j = json::array();
    for (const auto& c : charges) charges_j.push_back({{"fingerprint", c.fingerprint}, {"cost_nanos", c.cost.nanos()}});
    json j = {{"node_id", node_id},        {"iteration", iteration},     {"kind", kind},
              {"fields", runtime::to_json(fields)}, {"charges", charges_j}, {"sandbox_calls", sandbox_calls},
              {"cost_nanos", cost.nanos()}, {"warnings", warnings}};
    j["error"] = error ? json(*error) : json(nullptr);
    if (!error_raw.empty()) j["error_raw"] = error_raw;
    return j;
}

gateway::CostLedger RunResult::ledger(const gateway::Pricing& pricing) const {
    gateway::CostLedger l(pricing);
    for (const auto& n : node_trace)
        for (const auto& c : n.charges) l.add(c);
    return l;
}

json RunResult::to_json() const {
    json trace = json::array();
    for (const auto& n : node_trace) trace.push_back(n.to_json());
    return {{"instance_id", instance_id},
            {"final_output", final_output},
            {"cost_nanos", cost.nanos()},
            {"error_category", error_category ? json(exec::to_string(*error_category)) : json(nullptr)},
            {"error", error},
            {"trace", std::move(trace)}};
}

RunResult RunResult::from_json(const json& j) {
    RunResult r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.final_output = j.at("final_output").get<std::string>();
    r.cost = Money::from_nanos(j.at("cost_nanos").get<std::int64_t>());
    if (!j.at("error_category").is_null()) {
        const auto c = error_category_from_string(j["error_category"].get<std::string>());
        if (!c) throw DataError("unknown error_category in run record");
        r.error_category = c;
    }
    r.error = j.value("error", "");
    for (const auto& jn : j.at("trace")) {
        NodeTrace n;
        n.node_id = jn.at("node_id").get<std::string>();
        n.iteration = jn.at("iteration").get<int>();
        n.kind = jn.at("kind").get<std::string>();
        for (const auto& [k, v] : jn.at("fields").items()) {
            if (v.is_boolean()) n.fields[k] = v.get<bool>();
            else if (v.is_array()) n.fields[k] = v.get<std::vector<std::string>>();
            else n.fields[k] = v.get<std::string>();
        }
        for (const auto& c : jn.at("charges"))
            n.charges.push_back({c.at("fingerprint").get<std::string>(),
                                 Money::from_nanos(c.at("cost_nanos").get<std::int64_t>())});
        n.sandbox_calls = jn.at("sandbox_calls").get<std::size_t>();
        n.cost = Money::from_nanos(jn.at("cost_nanos").get<std::int64_t>());
        n.warnings = jn.at("warnings").get<std::vector<std::string>>();
        if (!jn.at("error").is_null()) n.error = jn["error"].get<std::string>();
        n.error_raw = jn.value("error_raw", "");
        r.node_trace.push_back(std::move(n));
    }
    return r;
}

namespace {

/// Outputs of executed nodes; repeated nodes keep one entry per iteration.
class Environment {
public:
    Environment(const ir::WorkflowProgram& w, const TaskInstance& inst) : program_(w), inst_(inst) {}

    void store(const std::string& id, runtime::ValueMap fields) { values_[id].push_back(std::move(fields)); }

    /// `iteration` selects the sibling copy for same-block references.
    Value lookup(const ir::Ref& r, int iteration, const std::string& own_block_member) const {
        if (r.scope == ir::Ref::Scope::Task) {
            if (r.field == "problem") return inst_.problem;
            if (!inst_.entry_point) throw std::invalid_argument("task.entry_point is not set for this instance");
            return *inst_.entry_point;
        }
        const auto it = values_.find(r.id);
        if (it == values_.end()) throw std::logic_error("node '" + r.id + "' has not run");
        const auto& runs = it->second;
        if (r.spread) {
            std::vector<std::string> all;
            for (const auto& fields : runs) all.push_back(runtime::render(fields.at(r.field)));
            return all;
        }
        const bool sibling = !own_block_member.empty() && program_.in_repeat(r.id) &&
                             same_block(r.id, own_block_member);
        const std::size_t idx = sibling ? static_cast<std::size_t>(iteration) : 0;
        if (idx >= runs.size()) throw std::logic_error("node '" + r.id + "' iteration missing");
        return runs[idx].at(r.field);
    }

private:
    bool same_block(const std::string& a, const std::string& b) const {
        for (const auto& st : program_.body) {
            if (const auto* rep = std::get_if<ir::RepeatBlock>(&st)) {
                bool has_a = false, has_b = false;
                for (const auto& n : rep->nodes) {
                    has_a |= n.id == a;
                    has_b |= n.id == b;
                }
                if (has_a || has_b) return has_a && has_b;
            }
        }
        return false;
    }

    const ir::WorkflowProgram& program_;
    const TaskInstance& inst_;
    std::map<std::string, std::vector<runtime::ValueMap>> values_;
};

std::string render_template(const ir::Template& t, const Environment& env, int iteration, const std::string& self) {
    std::string out;
    for (const auto& part : t.parts) {
        if (const auto* lit = std::get_if<std::string>(&part)) out += *lit;
        else out += runtime::render(env.lookup(std::get<ir::Ref>(part), iteration, self));
    }
    return out;
}

Value resolve(const ir::Binding& b, ir::ValueType type, const Environment& env, int iteration,
              const std::string& self) {
    if (type == ir::ValueType::TextList) {
        std::vector<std::string> items;
        auto add = [&](const Value& v) {
            if (const auto* l = std::get_if<std::vector<std::string>>(&v)) items.insert(items.end(), l->begin(), l->end());
            else items.push_back(runtime::render(v));
        };
        if (const auto* list = std::get_if<ir::ListExpr>(&b.value)) {
            for (const auto& item : list->items) {
                if (const auto* r = std::get_if<ir::Ref>(&item)) add(env.lookup(*r, iteration, self));
                else items.push_back(render_template(std::get<ir::Template>(item), env, iteration, self));
            }
        } else if (const auto* r = std::get_if<ir::Ref>(&b.value)) {
            add(env.lookup(*r, iteration, self));
        } else {
            items.push_back(render_template(std::get<ir::Template>(b.value), env, iteration, self));
        }
        return items;
    }
    if (const auto* r = std::get_if<ir::Ref>(&b.value)) {
        const Value v = env.lookup(*r, iteration, self);
        return type == ir::ValueType::Bool ? v : Value(runtime::render(v));
    }
    if (const auto* t = std::get_if<ir::Template>(&b.value)) return render_template(*t, env, iteration, self);
    throw std::invalid_argument("list value bound to a non-list slot");
}

struct Abort {
    ErrorCategory category;
    std::string message;
};

class Interpreter {
public:
    Interpreter(const ir::WorkflowProgram& w, const TaskInstance& inst, const EngineContext& ctx, RunResult& out)
        : w_(w), inst_(inst), ctx_(ctx), out_(out), env_(w, inst), ledger_(ctx.gateway ? ctx.gateway->pricing()
                                                                                    : gateway::Pricing{}) {
        op_ctx_.gateway = ctx.gateway;
        op_ctx_.sandbox = ctx.sandbox;
        op_ctx_.tests = inst.tests;
        op_ctx_.sandbox_timeout_s = std::min(ctx.limits.sandbox_timeout_s, ctx.limits.node_timeout_s);
    }

    void run() {
        guard();
        const ir::ExecutionPlan plan = ir::build_plan(w_);
        for (const auto& step : plan.steps) {
            switch (step.kind) {
                case ir::PlanStep::Kind::Node: run_node(*step.node, 0); break;
                case ir::PlanStep::Kind::Repeat:
                    for (int i = 0; i < step.repeat_count; ++i)
                        for (const auto* n : step.body) run_node(*n, i);
                    break;
                case ir::PlanStep::Kind::Branch: {
                    const Value cond = env_.lookup(step.branch->condition, 0, "");
                    if (runtime::as_bool(cond, step.branch->condition.str())) {
                        out_.final_output = runtime::render(env_.lookup(step.branch->result, 0, ""));
                        return;
                    }
                    break;
                }
            }
        }
        out_.final_output = runtime::render(env_.lookup(w_.terminal, 0, ""));
    }

private:
    void guard() const {
        if (w_.task_kind != ir::TaskKind::Code) return;
        for (const auto& r : w_.return_points()) {
            const auto* n = w_.find_node(r.id);
            if (n && n->kind == ir::OperatorKind::ScEnsemble)
                throw Abort{ErrorCategory::Workflow,
                            "guard: code workflow returns the output of ScEnsemble node '" + r.id + "'"};
        }
    }

    void run_node(const ir::NodeSpec& node, int iteration) {
        if (executed_ >= ctx_.limits.node_budget) {
            throw Abort{ErrorCategory::Workflow, BudgetExceeded(ctx_.limits.node_budget).what()};
        }
        ++executed_;
        const auto& schema = ir::OperatorRegistry::builtin().schema(node.kind);
        const std::string self = w_.in_repeat(node.id) ? node.id : std::string();

        NodeTrace trace;
        trace.node_id = node.id;
        trace.iteration = iteration;
        trace.kind = std::string(ir::to_string(node.kind));

        runtime::OperatorCall call;
        call.node_id = node.id;
        call.kind = node.kind;
        call.sampling = ctx_.sampling;
        runtime::OperatorResult result;
        std::optional<Abort> failure;
        const auto start = std::chrono::steady_clock::now();
        try {
            for (const auto& [slot, binding] : node.bindings) {
                const auto* s = schema.input(slot);
                call.inputs[slot] = resolve(binding, s ? s->type : ir::ValueType::Text, env_, iteration, self);
            }
            if (schema.has_instruction()) {
                std::string instr =
                    node.instruction ? runtime::render(resolve(*node.instruction, ir::ValueType::Instruction, env_,
                                                               iteration, self))
                                     : std::string();
                if (w_.contract_clause && &node == &w_.terminal_node())
                    instr = instr.empty() ? *w_.contract_clause : instr + "\n" + *w_.contract_clause;
                call.inputs["instruction"] = instr;
            }
            runtime::run_operator_into(call, op_ctx_, result);
        } catch (const gateway::GatewayError& e) {
            failure = Abort{ErrorCategory::Env, e.what()};
        } catch (const runtime::SandboxError& e) {
            failure = Abort{ErrorCategory::Env, e.what()};
        } catch (const ConfigError& e) {
            failure = Abort{ErrorCategory::Env, e.what()};
        } catch (const FormatError& e) {
            failure = Abort{ErrorCategory::Workflow, e.what()};
            trace.error_raw = e.raw();
        } catch (const std::exception& e) {
            failure = Abort{ErrorCategory::Workflow, e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!failure && elapsed > ctx_.limits.node_timeout_s) {
            failure = Abort{ErrorCategory::Env, "node exceeded the wall-clock limit of " +
                                                    std::to_string(ctx_.limits.node_timeout_s) + " s"};
        }

        for (const auto& ex : result.exchanges) {
            const std::size_t before = ledger_.per_call().size();
            ledger_.charge(ex);
            if (ledger_.per_call().size() > before) trace.charges.push_back(ledger_.per_call().back());
        }
        for (const auto& c : trace.charges) trace.cost += c.cost;
        trace.sandbox_calls = result.sandbox_calls.size();
        trace.warnings = result.warnings;
        out_.cost += trace.cost;
        if (failure) {
            trace.error = failure->message;
            out_.node_trace.push_back(std::move(trace));
            throw *failure;
        }
        trace.fields = result.fields;
        out_.node_trace.push_back(std::move(trace));
        env_.store(node.id, std::move(result.fields));
    }

    const ir::WorkflowProgram& w_;
    const TaskInstance& inst_;
    const EngineContext& ctx_;
    RunResult& out_;
    Environment env_;
    gateway::CostLedger ledger_;
    runtime::OperatorContext op_ctx_;
    std::size_t executed_ = 0;
};

}  // namespace

RunResult execute_instance(const ir::WorkflowProgram& w, const TaskInstance& inst, const EngineContext& ctx) {
    RunResult out;
    out.instance_id = inst.instance_id;
    const auto start = std::chrono::steady_clock::now();
    try {
        Interpreter(w, inst, ctx, out).run();
    } catch (const Abort& a) {
        out.final_output.clear();
        out.error_category = a.category;
        out.error = a.message;
    } catch (const std::exception& e) {
        out.final_output.clear();
        out.error_category = ErrorCategory::Workflow;
        out.error = e.what();
    }
    out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

DatasetRun execute_dataset(const ir::WorkflowProgram& w, const std::vector<TaskInstance>& instances,
                           const EngineContext& ctx, int parallelism) {
    if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
    std::vector<RunResult> results(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < instances.size();)
            results[i] = execute_instance(w, instances[i], ctx);
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(parallelism), instances.size());
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const RunResult& a, const RunResult& b) { return a.instance_id < b.instance_id; });

    DatasetRun run;
    run.ledger = gateway::CostLedger(ctx.gateway ? ctx.gateway->pricing() : gateway::Pricing{});
    for (const auto& r : results) run.ledger.merge(r.ledger(run.ledger.pricing()));
    run.results = std::move(results);
    return run;
}

std::string write_run(const std::string& runs_dir, const std::string& task, const std::string& workflow,
                      const std::string& run_name, const DatasetRun& run, std::optional<double> wall_s) {
    const std::filesystem::path dir = std::filesystem::path(runs_dir) / task / workflow;
    std::vector<json> rows;
    std::map<std::string, int> errors{{"workflow", 0}, {"env", 0}};
    for (const auto& r : run.results) {
        rows.push_back(r.to_json());
        if (r.error_category) ++errors[to_string(*r.error_category)];
    }
    const std::string path = (dir / (run_name + ".jsonl")).string();
    text::write_file(path, jsonl::dump(rows));

    json summary = {{"task", task},
                    {"workflow", workflow},
                    {"run", run_name},
                    {"instances", run.results.size()},
                    {"errors", errors},
                    {"cost_nanos", run.ledger.total().nanos()},
                    {"cost_usd", run.ledger.total().str()},
                    {"accuracy", nullptr}};
    if (wall_s) summary["wall_s"] = *wall_s;
    text::write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
    return path;
}

std::vector<RunResult> load_run(const std::string& path) {
    std::vector<RunResult> out;
    for (const auto& [line, j] : jsonl::parse(text::read_file(path), path)) {
        try {
            out.push_back(RunResult::from_json(j));
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(line) + ": bad run record: " + e.what());
        }
    }
    return out;
}

}  // namespace wfsynth::exec
