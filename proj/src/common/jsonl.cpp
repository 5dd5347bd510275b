// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/common/jsonl.hpp"

#include "wfsynth/common/errors.hpp"
#include "wfsynth/common/text.hpp"

namespace wfsynth::jsonl {

std::vector<ParsedLine> parse(const std::string& contents, const std::string& origin) {
    std::vector<ParsedLine> rows;
    const auto lines = text::split_lines(contents);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        try {
            rows.push_back({static_cast<int>(i + 1), nlohmann::json::parse(lines[i])});
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(origin + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return rows;
}

std::string dump(const std::vector<nlohmann::json>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

}  // namespace wfsynth::jsonl
