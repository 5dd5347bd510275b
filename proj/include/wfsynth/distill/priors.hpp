// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Distilled structural priors: compositional heuristics and output contracts,
// each tagged with the source tasks it came from.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wfsynth::distill {

enum class PriorKind { Heuristic, Contract };

std::string_view to_string(PriorKind k);

/// Optional machine-checkable form of a contract.
struct MachineCheck {
    enum class Type { Regex, Extractor };
    Type type = Type::Regex;
    std::string value;  // ECMAScript regex, or one of numeric|boxed|choice

    /// Throws std::invalid_argument when the regex does not compile or the
    /// extractor name is unknown.
    void check() const;
    /// True when `output` satisfies the contract (regex: full match after trim).
    bool matches(std::string_view output) const;
    std::string str() const;  // "regex:..." / "extractor:..."

    friend bool operator==(const MachineCheck&, const MachineCheck&) = default;
};

struct PriorEntry {
    PriorKind kind = PriorKind::Heuristic;
    std::string text;
    std::set<std::string> provenance;  // source task ids, never empty
    std::optional<MachineCheck> check;

    friend bool operator==(const PriorEntry&, const PriorEntry&) = default;
};

struct PriorFragment {
    std::string source_task;
    std::vector<PriorEntry> entries;
};

struct PriorSet {
    std::vector<PriorEntry> entries;

    std::vector<const PriorEntry*> of_kind(PriorKind k) const;

    nlohmann::json to_json() const;
    /// Throws DataError on malformed input.
    static PriorSet from_json(const nlohmann::json& j);

    friend bool operator==(const PriorSet&, const PriorSet&) = default;
};

/// Union with exact (kind, text) deduplication; provenance sets are merged.
/// Ordered by (first source task, kind, text).
PriorSet merge_priors(const std::vector<PriorFragment>& fragments);

}  // namespace wfsynth::distill
