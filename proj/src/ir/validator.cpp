// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/validator.hpp"

#include <map>
#include <set>

#include "wfsynth/common/text.hpp"
#include "wfsynth/ir/topo.hpp"

namespace wfsynth::ir {

std::string_view to_string(FindingCategory c) {
    switch (c) {
        case FindingCategory::Structural: return "structural";
        case FindingCategory::Contract: return "contract";
        case FindingCategory::Guard: return "guard";
    }
    return "?";
}

std::size_t ValidationReport::count(FindingCategory c) const {
    std::size_t n = 0;
    for (const auto& f : findings) n += f.category == c ? 1 : 0;
    return n;
}

namespace {

class Validator {
public:
    Validator(const WorkflowProgram& p, const OperatorRegistry& reg, const IrLimits& limits)
        : prog_(p), reg_(reg), limits_(limits) {}

    ValidationReport run() {
        for (const auto* n : prog_.nodes()) check_slots(*n);
        check_control();
        check_liveness();
        check_contract();
        check_guard();
        return std::move(report_);
    }

private:
    void add(FindingCategory c, const std::string& node, std::string msg) {
        report_.findings.push_back({c, node, std::move(msg)});
    }

    std::optional<ValueType> type_of(const Ref& r) const {
        if (r.scope == Ref::Scope::Task) {
            return r.field == "entry_point" ? ValueType::EntryPoint : ValueType::Text;
        }
        const NodeSpec* n = prog_.find_node(r.id);
        if (!n) return std::nullopt;
        const SlotSchema* f = reg_.schema(n->kind).output(r.field);
        if (!f) return std::nullopt;
        return f->type;
    }

    bool scalar_text(const Ref& r) const {
        const auto t = type_of(r);
        return t && (*t == ValueType::Text || *t == ValueType::EntryPoint);
    }

    bool template_ok(const Template& t) const {
        for (const auto& r : t.refs()) {
            if (!scalar_text(r)) return false;
        }
        return true;
    }

    bool binding_fits(const Binding& b, ValueType slot) const {
        switch (slot) {
            case ValueType::Text:
            case ValueType::Instruction:
                if (const auto* r = std::get_if<Ref>(&b.value)) return !r->spread && scalar_text(*r);
                if (const auto* t = std::get_if<Template>(&b.value)) return template_ok(*t);
                return false;
            case ValueType::EntryPoint:
                if (const auto* r = std::get_if<Ref>(&b.value)) {
                    return r->scope == Ref::Scope::Task && r->field == "entry_point";
                }
                if (const auto* t = std::get_if<Template>(&b.value)) return template_ok(*t);
                return false;
            case ValueType::TextList: {
                const auto* l = std::get_if<ListExpr>(&b.value);
                if (!l) return false;
                for (const auto& item : l->items) {
                    if (const auto* r = std::get_if<Ref>(&item)) {
                        if (!scalar_text(*r)) return false;
                    } else if (!template_ok(std::get<Template>(item))) {
                        return false;
                    }
                }
                return true;
            }
            case ValueType::Bool:
                return false;
        }
        return false;
    }

    void check_slots(const NodeSpec& n) {
        const OperatorSchema& schema = reg_.schema(n.kind);
        for (const auto& slot : schema.inputs) {
            const Binding* b = nullptr;
            if (slot.name == "instruction") {
                if (n.instruction) b = &*n.instruction;
            } else if (auto it = n.bindings.find(slot.name); it != n.bindings.end()) {
                b = &it->second;
            }
            if (!b) {
                add(FindingCategory::Structural, n.id, "input slot '" + slot.name + "' is not bound");
                continue;
            }
            if (!binding_fits(*b, slot.type)) {
                add(FindingCategory::Structural, n.id,
                    "slot '" + slot.name + "' expects " + std::string(to_string(slot.type)));
            }
        }
    }

    void check_control() {
        for (const auto& stmt : prog_.body) {
            if (const auto* r = std::get_if<RepeatBlock>(&stmt)) {
                if (r->count > limits_.repeat_count_max) {
                    add(FindingCategory::Structural, r->nodes.front().id,
                        "repeat count " + std::to_string(r->count) + " exceeds maximum " +
                            std::to_string(limits_.repeat_count_max));
                }
            } else if (const auto* b = std::get_if<BranchBlock>(&stmt)) {
                if (type_of(b->condition) != ValueType::Bool) {
                    add(FindingCategory::Structural, b->condition.id,
                        "branch condition '" + b->condition.str() + "' is not a boolean field");
                }
                if (!scalar_text(b->result)) {
                    add(FindingCategory::Structural, b->result.id, "branch return '" + b->result.str() + "' is not text");
                }
            }
        }
        if (!scalar_text(prog_.terminal)) {
            add(FindingCategory::Structural, prog_.terminal.id, "return '" + prog_.terminal.str() + "' is not text");
        }
        const auto branches = static_cast<int>(prog_.branch_count());
        if (branches > limits_.max_retries_max) {
            add(FindingCategory::Structural, "",
                "retry chain of " + std::to_string(branches) + " branches exceeds maximum " +
                    std::to_string(limits_.max_retries_max));
        }
    }

    void check_liveness() {
        std::map<std::string, std::set<std::string>> upstream;
        for (const auto* n : prog_.nodes()) {
            for (const auto& r : n->refs()) {
                if (r.scope == Ref::Scope::Node) upstream[n->id].insert(r.id);
            }
        }
        std::set<std::string> live;
        std::vector<std::string> stack;
        for (const auto& r : prog_.return_points()) stack.push_back(r.id);
        for (const auto& stmt : prog_.body) {
            if (const auto* b = std::get_if<BranchBlock>(&stmt)) stack.push_back(b->condition.id);
        }
        while (!stack.empty()) {
            const std::string id = stack.back();
            stack.pop_back();
            if (!live.insert(id).second) continue;
            for (const auto& up : upstream[id]) stack.push_back(up);
        }
        for (const auto* n : prog_.nodes()) {
            if (!live.count(n->id)) {
                add(FindingCategory::Structural, n->id, "node output never reaches a return or branch");
            }
        }
    }

    void check_contract() {
        const NodeSpec& term = prog_.terminal_node();
        if (prog_.contract_clause) {
            if (text::trim(*prog_.contract_clause).empty()) {
                add(FindingCategory::Contract, term.id, "contract clause is empty");
            } else if (!reg_.schema(term.kind).has_instruction()) {
                add(FindingCategory::Contract, term.id,
                    "contract clause cannot attach to " + reg_.schema(term.kind).name +
                        " terminal (no instruction slot)");
            }
        } else if (requires_contract(prog_.task_kind)) {
            add(FindingCategory::Contract, term.id,
                "terminal node lacks an output contract clause required for " +
                    std::string(to_string(prog_.task_kind)) + " tasks");
        }
    }

    // Taint flows forward from ScEnsemble nodes and is cleared by Test nodes.
    void check_guard() {
        if (prog_.task_kind != TaskKind::Code) return;
        std::set<std::string> tainted;
        for (const auto& id : topo_order(prog_)) {
            const NodeSpec* n = prog_.find_node(id);
            if (n->kind == OperatorKind::ScEnsemble) {
                tainted.insert(id);
                continue;
            }
            if (n->kind == OperatorKind::Test) continue;
            for (const auto& r : n->refs()) {
                if (r.scope == Ref::Scope::Node && tainted.count(r.id)) {
                    tainted.insert(id);
                    break;
                }
            }
        }
        for (const auto& r : prog_.return_points()) {
            if (tainted.count(r.id)) {
                add(FindingCategory::Guard, r.id,
                    "ScEnsemble output reaches return '" + r.str() +
                        "' without Test validation; text voting cannot judge code");
            }
        }
    }

    const WorkflowProgram& prog_;
    const OperatorRegistry& reg_;
    const IrLimits& limits_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_workflow(const WorkflowProgram& program, const OperatorRegistry& registry,
                                   const IrLimits& limits) {
    return Validator(program, registry, limits).run();
}

}  // namespace wfsynth::ir
