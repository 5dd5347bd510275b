// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace wfsynth::runtime {

/// A concrete slot or field value: text, a list of texts, or a pass flag.
using Value = std::variant<std::string, std::vector<std::string>, bool>;
using ValueMap = std::map<std::string, Value, std::less<>>;

/// Text rendering used for interpolation: lists join with newlines, flags are
/// "true"/"false".
std::string render(const Value& v);

/// Returns the text alternative or throws std::invalid_argument naming `what`.
const std::string& as_text(const Value& v, const std::string& what);
const std::vector<std::string>& as_list(const Value& v, const std::string& what);
bool as_bool(const Value& v, const std::string& what);

nlohmann::json to_json(const Value& v);
nlohmann::json to_json(const ValueMap& m);

}  // namespace wfsynth::runtime
