// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Workflow intermediate representation: a typed operator graph with bounded
// repeat blocks and test-conditioned early returns.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wfsynth/common/errors.hpp"
#include "wfsynth/ir/operator_kind.hpp"

namespace wfsynth::ir {

enum class TaskKind { MathNumeric, MathBoxed, MultipleChoice, Code, Qa };
enum class Domain { Math, Code, Qa };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> task_kind_from_string(std::string_view s);
std::string_view to_string(Domain d);
std::optional<Domain> domain_from_string(std::string_view s);
Domain domain_of(TaskKind kind);

/// Task kinds whose terminal node must carry an output contract clause.
bool requires_contract(TaskKind kind);

/// Reference to a task input (`task.problem`) or an upstream node output
/// (`gen.response`, or `gen[*].response` for every iteration of a repeated node).
struct Ref {
    enum class Scope { Task, Node };

    Scope scope = Scope::Node;
    std::string id;     // node id; "task" for task scope
    std::string field;
    bool spread = false;

    static Ref task(std::string field) { return {Scope::Task, "task", std::move(field), false}; }
    static Ref node(std::string id, std::string field, bool spread = false) {
        return {Scope::Node, std::move(id), std::move(field), spread};
    }

    std::string str() const;
    friend bool operator==(const Ref&, const Ref&) = default;
};

/// Literal text with `${ref}` interpolations.
struct Template {
    std::vector<std::variant<std::string, Ref>> parts;

    static Template literal(std::string s);
    std::vector<Ref> refs() const;
    friend bool operator==(const Template&, const Template&) = default;
};

struct ListExpr {
    std::vector<std::variant<Ref, Template>> items;
    friend bool operator==(const ListExpr&, const ListExpr&) = default;
};

struct Binding {
    std::variant<Ref, Template, ListExpr> value;

    std::vector<Ref> refs() const;
    friend bool operator==(const Binding&, const Binding&) = default;
};

struct NodeSpec {
    std::string id;
    OperatorKind kind = OperatorKind::Custom;
    std::optional<Binding> instruction;
    std::map<std::string, Binding> bindings;  // excludes the instruction slot

    /// Every reference made by bindings and instruction, in slot order.
    std::vector<Ref> refs() const;
    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct RepeatBlock {
    int count = 1;
    std::vector<NodeSpec> nodes;
    friend bool operator==(const RepeatBlock&, const RepeatBlock&) = default;
};

/// `branch cond { return result }`: when the boolean `cond` is true the
/// program returns `result`; otherwise execution continues.
struct BranchBlock {
    Ref condition;
    Ref result;
    friend bool operator==(const BranchBlock&, const BranchBlock&) = default;
};

using Statement = std::variant<NodeSpec, RepeatBlock, BranchBlock>;

enum class ControlForm { Sequence, Repeat, BranchOnTest, EarlyReturn };

struct IrLimits {
    int repeat_count_max = 8;
    int max_retries_max = 4;
};

struct WorkflowProgram {
    std::string name;
    TaskKind task_kind = TaskKind::MathNumeric;
    std::optional<std::string> contract_clause;
    std::vector<Statement> body;
    Ref terminal;  // final `return`

    const NodeSpec* find_node(std::string_view id) const;
    /// All declared nodes in declaration order (repeat bodies inline).
    std::vector<const NodeSpec*> nodes() const;
    /// Repeat count of the block containing `id`, or 1 outside any block.
    int repeat_count_of(std::string_view id) const;
    bool in_repeat(std::string_view id) const;
    std::size_t unrolled_node_count() const;
    std::size_t branch_count() const;
    /// Early-return results followed by the terminal.
    std::vector<Ref> return_points() const;
    const NodeSpec& terminal_node() const;

    friend bool operator==(const WorkflowProgram&, const WorkflowProgram&) = default;
};

ControlForm control_form(const Statement& s);

struct SourceLocation {
    int line = 1;    // 1-based
    int column = 1;  // 1-based, in code points
};

class SyntaxError : public Error {
public:
    SyntaxError(SourceLocation loc, const std::string& msg);
    SourceLocation location() const { return loc_; }

private:
    SourceLocation loc_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class CycleError : public Error {
public:
    using Error::Error;
};

}  // namespace wfsynth::ir
