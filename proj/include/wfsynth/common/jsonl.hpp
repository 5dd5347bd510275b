// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wfsynth::jsonl {

struct ParsedLine {
    int line = 0;  // 1-based
    nlohmann::json value;
};

/// Parses a JSON-lines document. Blank lines are skipped; a malformed line
/// throws DataError carrying `origin` and the line number.
std::vector<ParsedLine> parse(const std::string& contents, const std::string& origin);

std::string dump(const std::vector<nlohmann::json>& rows);

}  // namespace wfsynth::jsonl
