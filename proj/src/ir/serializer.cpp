// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/serializer.hpp"

#include <map>

#include "wfsynth/ir/parser.hpp"

namespace wfsynth::ir {

namespace {

void escape_into(std::string& out, std::string_view s, bool double_dollar) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '$': out += double_dollar ? "$$" : "$"; break;
            default: out.push_back(c);
        }
    }
}

std::string render_template(const Template& t) {
    std::string out = "\"";
    for (const auto& part : t.parts) {
        if (const auto* lit = std::get_if<std::string>(&part)) {
            escape_into(out, *lit, true);
        } else {
            out += "${" + std::get<Ref>(part).str() + "}";
        }
    }
    out += "\"";
    return out;
}

std::string render_binding(const Binding& b) {
    if (const auto* r = std::get_if<Ref>(&b.value)) return r->str();
    if (const auto* t = std::get_if<Template>(&b.value)) return render_template(*t);
    const auto& list = std::get<ListExpr>(b.value);
    std::string out = "[";
    for (std::size_t i = 0; i < list.items.size(); ++i) {
        if (i) out += ", ";
        if (const auto* r = std::get_if<Ref>(&list.items[i])) {
            out += r->str();
        } else {
            out += render_template(std::get<Template>(list.items[i]));
        }
    }
    out += "]";
    return out;
}

void render_node(std::string& out, const NodeSpec& n, const std::string& indent) {
    out += indent + "node " + n.id + " = " + std::string(to_string(n.kind)) + " {\n";
    std::map<std::string, const Binding*> sorted;
    for (const auto& [slot, b] : n.bindings) sorted.emplace(slot, &b);
    if (n.instruction) sorted.emplace("instruction", &*n.instruction);
    for (const auto& [slot, b] : sorted) {
        out += indent + "  " + slot + " = " + render_binding(*b) + "\n";
    }
    out += indent + "}\n";
}

}  // namespace

std::string quote_literal(std::string_view s) {
    std::string out = "\"";
    escape_into(out, s, true);
    out += "\"";
    return out;
}

std::string serialize_workflow(const WorkflowProgram& program) {
    std::string out;
    out += "workflow " + program.name + "\n";
    out += "kind " + std::string(to_string(program.task_kind)) + "\n";
    if (program.contract_clause) {
        out += "contract \"";
        escape_into(out, *program.contract_clause, false);
        out += "\"\n";
    }
    for (const auto& stmt : program.body) {
        out += "\n";
        if (const auto* n = std::get_if<NodeSpec>(&stmt)) {
            render_node(out, *n, "");
        } else if (const auto* r = std::get_if<RepeatBlock>(&stmt)) {
            out += "repeat " + std::to_string(r->count) + " {\n";
            for (std::size_t i = 0; i < r->nodes.size(); ++i) {
                if (i) out += "\n";
                render_node(out, r->nodes[i], "  ");
            }
            out += "}\n";
        } else {
            const auto& b = std::get<BranchBlock>(stmt);
            out += "branch " + b.condition.str() + " {\n";
            out += "  return " + b.result.str() + "\n";
            out += "}\n";
        }
    }
    out += "\nreturn " + program.terminal.str() + "\n";
    return out;
}

std::string canonicalize(std::string_view source) {
    return serialize_workflow(parse_workflow(source));
}

}  // namespace wfsynth::ir
