// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/program.hpp"

#include <stdexcept>

namespace wfsynth::ir {

namespace {

constexpr std::pair<TaskKind, std::string_view> kTaskKinds[] = {
    {TaskKind::MathNumeric, "math-numeric"},
    {TaskKind::MathBoxed, "math-boxed"},
    {TaskKind::MultipleChoice, "multiple-choice"},
    {TaskKind::Code, "code"},
    {TaskKind::Qa, "qa"},
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(TaskKind kind) {
    for (const auto& [k, s] : kTaskKinds) {
        if (k == kind) return s;
    }
    return "?";
}

std::optional<TaskKind> task_kind_from_string(std::string_view s) {
    for (const auto& [k, name] : kTaskKinds) {
        if (name == s) return k;
    }
    return std::nullopt;
}

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::Math: return "math";
        case Domain::Code: return "code";
        case Domain::Qa: return "qa";
    }
    return "?";
}

std::optional<Domain> domain_from_string(std::string_view s) {
    if (s == "math") return Domain::Math;
    if (s == "code") return Domain::Code;
    if (s == "qa") return Domain::Qa;
    return std::nullopt;
}

Domain domain_of(TaskKind kind) {
    switch (kind) {
        case TaskKind::Code: return Domain::Code;
        case TaskKind::Qa: return Domain::Qa;
        default: return Domain::Math;
    }
}

bool requires_contract(TaskKind kind) {
    return domain_of(kind) == Domain::Math;
}

std::string Ref::str() const {
    if (scope == Scope::Task) return "task." + field;
    return id + (spread ? "[*]." : ".") + field;
}

Template Template::literal(std::string s) {
    Template t;
    if (!s.empty()) t.parts.emplace_back(std::move(s));
    return t;
}

std::vector<Ref> Template::refs() const {
    std::vector<Ref> out;
    for (const auto& p : parts) {
        if (const auto* r = std::get_if<Ref>(&p)) out.push_back(*r);
    }
    return out;
}

std::vector<Ref> Binding::refs() const {
    return std::visit(overloaded{
                          [](const Ref& r) { return std::vector<Ref>{r}; },
                          [](const Template& t) { return t.refs(); },
                          [](const ListExpr& l) {
                              std::vector<Ref> out;
                              for (const auto& item : l.items) {
                                  if (const auto* r = std::get_if<Ref>(&item)) {
                                      out.push_back(*r);
                                  } else {
                                      auto inner = std::get<Template>(item).refs();
                                      out.insert(out.end(), inner.begin(), inner.end());
                                  }
                              }
                              return out;
                          },
                      },
                      value);
}

std::vector<Ref> NodeSpec::refs() const {
    std::vector<Ref> out;
    for (const auto& [slot, b] : bindings) {
        auto r = b.refs();
        out.insert(out.end(), r.begin(), r.end());
    }
    if (instruction) {
        auto r = instruction->refs();
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

const NodeSpec* WorkflowProgram::find_node(std::string_view id) const {
    for (const auto* n : nodes()) {
        if (n->id == id) return n;
    }
    return nullptr;
}

std::vector<const NodeSpec*> WorkflowProgram::nodes() const {
    std::vector<const NodeSpec*> out;
    for (const auto& s : body) {
        if (const auto* n = std::get_if<NodeSpec>(&s)) {
            out.push_back(n);
        } else if (const auto* r = std::get_if<RepeatBlock>(&s)) {
            for (const auto& n2 : r->nodes) out.push_back(&n2);
        }
    }
    return out;
}

int WorkflowProgram::repeat_count_of(std::string_view id) const {
    for (const auto& s : body) {
        if (const auto* r = std::get_if<RepeatBlock>(&s)) {
            for (const auto& n : r->nodes) {
                if (n.id == id) return r->count;
            }
        }
    }
    return 1;
}

bool WorkflowProgram::in_repeat(std::string_view id) const {
    for (const auto& s : body) {
        if (const auto* r = std::get_if<RepeatBlock>(&s)) {
            for (const auto& n : r->nodes) {
                if (n.id == id) return true;
            }
        }
    }
    return false;
}

std::size_t WorkflowProgram::unrolled_node_count() const {
    std::size_t total = 0;
    for (const auto& s : body) {
        if (std::holds_alternative<NodeSpec>(s)) {
            total += 1;
        } else if (const auto* r = std::get_if<RepeatBlock>(&s)) {
            total += static_cast<std::size_t>(r->count) * r->nodes.size();
        }
    }
    return total;
}

std::size_t WorkflowProgram::branch_count() const {
    std::size_t n = 0;
    for (const auto& s : body) n += std::holds_alternative<BranchBlock>(s) ? 1 : 0;
    return n;
}

std::vector<Ref> WorkflowProgram::return_points() const {
    std::vector<Ref> out;
    for (const auto& s : body) {
        if (const auto* b = std::get_if<BranchBlock>(&s)) out.push_back(b->result);
    }
    out.push_back(terminal);
    return out;
}

const NodeSpec& WorkflowProgram::terminal_node() const {
    const NodeSpec* n = find_node(terminal.id);
    if (!n) throw std::logic_error("terminal node missing: " + terminal.id);
    return *n;
}

ControlForm control_form(const Statement& s) {
    if (std::holds_alternative<RepeatBlock>(s)) return ControlForm::Repeat;
    if (std::holds_alternative<BranchBlock>(s)) return ControlForm::BranchOnTest;
    return ControlForm::Sequence;
}

SyntaxError::SyntaxError(SourceLocation loc, const std::string& msg)
    : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg), loc_(loc) {}

}  // namespace wfsynth::ir
