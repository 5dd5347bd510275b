// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/topo.hpp"

#include <map>
#include <set>

namespace wfsynth::ir {

namespace {

// Kahn's algorithm with the smallest ready index first. `deps[i]` lists the
// indices that must precede i. Returns false on a cycle.
bool kahn(const std::vector<std::set<int>>& deps, std::vector<int>& order) {
    const int n = static_cast<int>(deps.size());
    std::vector<int> pending(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> users(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pending[static_cast<std::size_t>(i)] = static_cast<int>(deps[static_cast<std::size_t>(i)].size());
        for (int d : deps[static_cast<std::size_t>(i)]) users[static_cast<std::size_t>(d)].push_back(i);
    }
    std::set<int> ready;
    for (int i = 0; i < n; ++i) {
        if (pending[static_cast<std::size_t>(i)] == 0) ready.insert(i);
    }
    order.clear();
    while (!ready.empty()) {
        const int i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(i);
        for (int u : users[static_cast<std::size_t>(i)]) {
            if (--pending[static_cast<std::size_t>(u)] == 0) ready.insert(u);
        }
    }
    return static_cast<int>(order.size()) == n;
}

}  // namespace

ExecutionPlan build_plan(const WorkflowProgram& program) {
    const auto& body = program.body;

    // statement index and segment (count of preceding branches) per node id
    std::map<std::string, int, std::less<>> stmt_of;
    std::vector<int> segment_of(body.size(), 0);
    int segment = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        segment_of[i] = segment;
        if (const auto* n = std::get_if<NodeSpec>(&body[i])) {
            stmt_of[n->id] = static_cast<int>(i);
        } else if (const auto* r = std::get_if<RepeatBlock>(&body[i])) {
            for (const auto& n2 : r->nodes) stmt_of[n2.id] = static_cast<int>(i);
        } else {
            ++segment;
        }
    }

    auto node_deps = [&](const NodeSpec& n) {
        std::set<int> out;
        for (const auto& r : n.refs()) {
            if (r.scope != Ref::Scope::Node) continue;
            if (r.id == n.id) throw CycleError("node '" + n.id + "' binds to its own output");
            const auto it = stmt_of.find(r.id);
            if (it != stmt_of.end()) out.insert(it->second);
        }
        return out;
    };

    ExecutionPlan plan;
    std::size_t start = 0;
    while (start < body.size()) {
        std::size_t end = start;
        while (end < body.size() && !std::holds_alternative<BranchBlock>(body[end])) ++end;

        // Units [start, end) form one segment.
        const int seg = segment_of[start];
        const std::size_t count = end - start;
        std::vector<std::set<int>> deps(count);
        for (std::size_t u = 0; u < count; ++u) {
            const std::size_t stmt = start + u;
            std::set<int> raw;
            if (const auto* n = std::get_if<NodeSpec>(&body[stmt])) {
                raw = node_deps(*n);
            } else if (const auto* r = std::get_if<RepeatBlock>(&body[stmt])) {
                for (const auto& n2 : r->nodes) {
                    auto d = node_deps(n2);
                    raw.insert(d.begin(), d.end());
                }
            }
            for (int d : raw) {
                if (d == static_cast<int>(stmt)) continue;  // sibling inside the same repeat
                if (segment_of[static_cast<std::size_t>(d)] > seg) {
                    throw SchemaError("statement " + std::to_string(stmt + 1) +
                                      " binds to a node declared after a later branch");
                }
                if (segment_of[static_cast<std::size_t>(d)] == seg) {
                    deps[u].insert(d - static_cast<int>(start));
                }
            }
        }
        std::vector<int> order;
        if (!kahn(deps, order)) {
            std::string names;
            std::set<int> done(order.begin(), order.end());
            for (std::size_t u = 0; u < count; ++u) {
                if (done.count(static_cast<int>(u))) continue;
                const auto& st = body[start + u];
                if (const auto* n = std::get_if<NodeSpec>(&st)) {
                    names += (names.empty() ? "" : ", ") + n->id;
                } else {
                    for (const auto& n2 : std::get<RepeatBlock>(st).nodes) {
                        names += (names.empty() ? "" : ", ") + n2.id;
                    }
                }
            }
            throw CycleError("binding cycle among nodes: " + names);
        }

        for (int u : order) {
            const auto& st = body[start + static_cast<std::size_t>(u)];
            PlanStep step;
            if (const auto* n = std::get_if<NodeSpec>(&st)) {
                step.kind = PlanStep::Kind::Node;
                step.node = n;
            } else {
                const auto& r = std::get<RepeatBlock>(st);
                step.kind = PlanStep::Kind::Repeat;
                step.repeat_count = r.count;
                std::map<std::string, int, std::less<>> local;
                for (std::size_t i = 0; i < r.nodes.size(); ++i) local[r.nodes[i].id] = static_cast<int>(i);
                std::vector<std::set<int>> inner(r.nodes.size());
                for (std::size_t i = 0; i < r.nodes.size(); ++i) {
                    for (const auto& ref : r.nodes[i].refs()) {
                        const auto it = local.find(ref.id);
                        if (ref.scope == Ref::Scope::Node && it != local.end()) inner[i].insert(it->second);
                    }
                }
                std::vector<int> inner_order;
                if (!kahn(inner, inner_order)) throw CycleError("binding cycle inside repeat block");
                for (int i : inner_order) step.body.push_back(&r.nodes[static_cast<std::size_t>(i)]);
            }
            plan.steps.push_back(std::move(step));
        }

        if (end < body.size()) {
            PlanStep step;
            step.kind = PlanStep::Kind::Branch;
            step.branch = &std::get<BranchBlock>(body[end]);
            plan.steps.push_back(step);
        }
        start = end + 1;
    }
    return plan;
}

std::vector<std::string> topo_order(const WorkflowProgram& program) {
    std::vector<std::string> out;
    for (const auto& step : build_plan(program).steps) {
        if (step.kind == PlanStep::Kind::Node) {
            out.push_back(step.node->id);
        } else if (step.kind == PlanStep::Kind::Repeat) {
            for (const auto* n : step.body) out.push_back(n->id);
        }
    }
    return out;
}

}  // namespace wfsynth::ir
