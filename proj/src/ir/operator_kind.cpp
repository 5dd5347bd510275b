// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/ir/operator_kind.hpp"

#include <stdexcept>

namespace wfsynth::ir {

std::string_view to_string(ValueType t) {
    switch (t) {
        case ValueType::Text: return "text";
        case ValueType::TextList: return "text-list";
        case ValueType::EntryPoint: return "entry-point";
        case ValueType::Instruction: return "instruction";
        case ValueType::Bool: return "bool";
    }
    return "?";
}

const SlotSchema* OperatorSchema::input(std::string_view slot) const {
    for (const auto& s : inputs) {
        if (s.name == slot) return &s;
    }
    return nullptr;
}

const SlotSchema* OperatorSchema::output(std::string_view field) const {
    for (const auto& s : outputs) {
        if (s.name == field) return &s;
    }
    return nullptr;
}

OperatorRegistry::OperatorRegistry(std::vector<OperatorSchema> schemas) : schemas_(std::move(schemas)) {}

const OperatorRegistry& OperatorRegistry::builtin() {
    using VT = ValueType;
    static const OperatorRegistry registry({
        {OperatorKind::Custom, "Custom",
         {{"input", VT::Text}, {"instruction", VT::Instruction}},
         {{"response", VT::Text}},
         "text + instruction", "text response",
         "Free-form generation steered by the node instruction"},
        {OperatorKind::AnswerGenerate, "AnswerGenerate",
         {{"input", VT::Text}},
         {{"thought", VT::Text}, {"answer", VT::Text}},
         "question text", "thought + answer",
         "Step-by-step reasoning that returns the reasoning and the final answer separately"},
        {OperatorKind::Programmer, "Programmer",
         {{"problem", VT::Text}},
         {{"code", VT::Text}, {"output", VT::Text}},
         "problem description", "code + output",
         "Writes a Python program and runs it in the sandbox"},
        {OperatorKind::CustomCodeGenerate, "CustomCodeGenerate",
         {{"problem", VT::Text}, {"entry_point", VT::EntryPoint}, {"instruction", VT::Instruction}},
         {{"response", VT::Text}},
         "problem + entry point", "code string",
         "Writes a Python function with the required entry point"},
        {OperatorKind::ScEnsemble, "ScEnsemble",
         {{"solutions", VT::TextList}, {"problem", VT::Text}},
         {{"response", VT::Text}},
         "list of solutions", "best solution",
         "Selects the most common candidate by normalized textual vote"},
        {OperatorKind::Test, "Test",
         {{"problem", VT::Text}, {"solution", VT::Text}, {"entry_point", VT::EntryPoint}},
         {{"result", VT::Bool}, {"solution", VT::Text}},
         "code + test cases", "pass/fail + output",
         "Runs a candidate function against the task's unit tests"},
    });
    return registry;
}

const OperatorSchema& OperatorRegistry::schema(OperatorKind kind) const {
    for (const auto& s : schemas_) {
        if (s.kind == kind) return s;
    }
    throw std::out_of_range("operator kind not in registry: " + std::string(to_string(kind)));
}

const OperatorSchema* OperatorRegistry::find(std::string_view name) const {
    for (const auto& s : schemas_) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::Custom: return "Custom";
        case OperatorKind::AnswerGenerate: return "AnswerGenerate";
        case OperatorKind::Programmer: return "Programmer";
        case OperatorKind::CustomCodeGenerate: return "CustomCodeGenerate";
        case OperatorKind::ScEnsemble: return "ScEnsemble";
        case OperatorKind::Test: return "Test";
    }
    return "?";
}

std::optional<OperatorKind> operator_kind_from_string(std::string_view name) {
    for (auto k : kAllOperatorKinds) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

}  // namespace wfsynth::ir
