// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/runtime/value.hpp"

#include <stdexcept>

#include "wfsynth/common/text.hpp"

namespace wfsynth::runtime {

std::string render(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* l = std::get_if<std::vector<std::string>>(&v)) return text::join(*l, "\n");
    return std::get<bool>(v) ? "true" : "false";
}

const std::string& as_text(const Value& v, const std::string& what) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument(what + " is not text");
}

const std::vector<std::string>& as_list(const Value& v, const std::string& what) {
    if (const auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
    throw std::invalid_argument(what + " is not a text list");
}

bool as_bool(const Value& v, const std::string& what) {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw std::invalid_argument(what + " is not a flag");
}

nlohmann::json to_json(const Value& v) {
    return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

nlohmann::json to_json(const ValueMap& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) j[k] = to_json(v);
    return j;
}

}  // namespace wfsynth::runtime
