// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// The closed operator library: six built-in kinds with fixed input slots and
// output fields.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wfsynth::ir {

enum class OperatorKind {
    Custom,
    AnswerGenerate,
    Programmer,
    CustomCodeGenerate,
    ScEnsemble,
    Test,
};

inline constexpr std::array<OperatorKind, 6> kAllOperatorKinds = {
    OperatorKind::Custom,     OperatorKind::AnswerGenerate, OperatorKind::Programmer,
    OperatorKind::CustomCodeGenerate, OperatorKind::ScEnsemble, OperatorKind::Test,
};

/// Semantic type of an input slot or output field.
enum class ValueType {
    Text,
    TextList,
    EntryPoint,
    Instruction,
    Bool,
};

std::string_view to_string(ValueType t);

struct SlotSchema {
    std::string name;
    ValueType type;
};

struct OperatorSchema {
    OperatorKind kind;
    std::string name;
    std::vector<SlotSchema> inputs;
    std::vector<SlotSchema> outputs;
    std::string input_summary;
    std::string output_summary;
    std::string description;

    const SlotSchema* input(std::string_view slot) const;
    const SlotSchema* output(std::string_view field) const;
    bool has_instruction() const { return input("instruction") != nullptr; }
};

/// Lookup table over the operator library. `builtin()` is the closed set used
/// everywhere; tests may build reduced registries.
class OperatorRegistry {
public:
    explicit OperatorRegistry(std::vector<OperatorSchema> schemas);

    static const OperatorRegistry& builtin();

    const OperatorSchema& schema(OperatorKind kind) const;
    const OperatorSchema* find(std::string_view name) const;
    const std::vector<OperatorSchema>& schemas() const { return schemas_; }

private:
    std::vector<OperatorSchema> schemas_;
};

std::string_view to_string(OperatorKind kind);
std::optional<OperatorKind> operator_kind_from_string(std::string_view name);

}  // namespace wfsynth::ir
