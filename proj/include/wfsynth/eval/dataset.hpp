// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON-lines datasets: one `{id, problem, answer, entry_point?, tests?}`
// object per line.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfsynth/exec/engine.hpp"
#include "wfsynth/ir/program.hpp"

namespace wfsynth::eval {

enum class ScorerKind { NumericExact, BoxedMatch, ChoiceLetter, CodeTests, TextF1 };

std::string_view to_string(ScorerKind k);
std::optional<ScorerKind> scorer_kind_from_string(std::string_view s);
ScorerKind scorer_for(ir::TaskKind kind);

struct DataRecordError {
    int line = 0;
    std::string message;
};

struct Dataset {
    std::string task_id;
    ir::TaskKind task_kind = ir::TaskKind::MathNumeric;
    ScorerKind scorer = ScorerKind::NumericExact;
    std::vector<exec::TaskInstance> instances;  // file order
    std::vector<DataRecordError> errors;        // records that did not parse

    const exec::TaskInstance* find(const std::string& id) const;
};

/// Parses every line; a record that fails validation becomes a DataRecordError
/// instead of being dropped silently. Code records must carry `entry_point`
/// and a `tests` array; other kinds must not carry `entry_point`.
Dataset parse_dataset(const std::string& contents, const std::string& task_id, ir::TaskKind kind,
                      const std::string& origin);

/// Loads `path`; throws DataError when the file is missing.
Dataset load_dataset(const std::string& path, const std::string& task_id, ir::TaskKind kind);

}  // namespace wfsynth::eval
