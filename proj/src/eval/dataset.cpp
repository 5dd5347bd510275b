// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/eval/dataset.hpp"

#include <filesystem>
#include <set>

#include "wfsynth/common/text.hpp"

namespace wfsynth::eval {

using nlohmann::json;

std::string_view to_string(ScorerKind k) {
    switch (k) {
        case ScorerKind::NumericExact: return "numeric-exact";
        case ScorerKind::BoxedMatch: return "boxed-match";
        case ScorerKind::ChoiceLetter: return "choice-letter";
        case ScorerKind::CodeTests: return "code-tests";
        case ScorerKind::TextF1: return "text-f1";
    }
    return "numeric-exact";
}

std::optional<ScorerKind> scorer_kind_from_string(std::string_view s) {
    for (auto k : {ScorerKind::NumericExact, ScorerKind::BoxedMatch, ScorerKind::ChoiceLetter, ScorerKind::CodeTests,
                   ScorerKind::TextF1})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

ScorerKind scorer_for(ir::TaskKind kind) {
    switch (kind) {
        case ir::TaskKind::MathNumeric: return ScorerKind::NumericExact;
        case ir::TaskKind::MathBoxed: return ScorerKind::BoxedMatch;
        case ir::TaskKind::MultipleChoice: return ScorerKind::ChoiceLetter;
        case ir::TaskKind::Code: return ScorerKind::CodeTests;
        case ir::TaskKind::Qa: return ScorerKind::TextF1;
    }
    return ScorerKind::NumericExact;
}

const exec::TaskInstance* Dataset::find(const std::string& id) const {
    for (const auto& i : instances)
        if (i.instance_id == id) return &i;
    return nullptr;
}

Dataset parse_dataset(const std::string& contents, const std::string& task_id, ir::TaskKind kind,
                      const std::string& origin) {
    Dataset ds;
    ds.task_id = task_id;
    ds.task_kind = kind;
    ds.scorer = scorer_for(kind);
    std::set<std::string> seen;
    const bool code = kind == ir::TaskKind::Code;
    int line_no = 0;
    for (const auto& raw : text::split_lines(contents)) {
        ++line_no;
        if (text::trim(raw).empty()) continue;
        try {
            const json j = json::parse(raw);
            exec::TaskInstance inst;
            const json& id = j.at("id");
            inst.instance_id = id.is_string() ? id.get<std::string>() : id.dump();
            inst.problem = j.at("problem").get<std::string>();
            if (code) {
                inst.entry_point = j.at("entry_point").get<std::string>();
                inst.tests = j.at("tests").get<std::vector<std::string>>();
                inst.gold = j.value("answer", json(nullptr));
            } else {
                if (j.contains("entry_point")) throw DataError("entry_point is only allowed on code records");
                inst.gold = j.at("answer");
                if (!inst.gold.is_string() && !inst.gold.is_number() && !inst.gold.is_array())
                    throw DataError("answer must be a string, number or list of strings");
            }
            if (!seen.insert(inst.instance_id).second) throw DataError("duplicate id '" + inst.instance_id + "'");
            ds.instances.push_back(std::move(inst));
        } catch (const json::exception& e) {
            ds.errors.push_back({line_no, origin + ":" + std::to_string(line_no) + ": " + e.what()});
        } catch (const DataError& e) {
            ds.errors.push_back({line_no, origin + ":" + std::to_string(line_no) + ": " + e.what()});
        }
    }
    return ds;
}

Dataset load_dataset(const std::string& path, const std::string& task_id, ir::TaskKind kind) {
    if (!std::filesystem::exists(path)) throw DataError("dataset not found: " + path);
    return parse_dataset(text::read_file(path), task_id, kind, path);
}

}  // namespace wfsynth::eval
