// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/distill/priors.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <stdexcept>

#include "wfsynth/common/errors.hpp"
#include "wfsynth/common/text.hpp"

namespace wfsynth::distill {

using nlohmann::json;

namespace {

const std::regex& numeric_re() {
    static const std::regex re(R"(-?\$?\d[\d,]*(\.\d+)?)");
    return re;
}

}  // namespace

std::string_view to_string(PriorKind k) { return k == PriorKind::Heuristic ? "heuristic" : "contract"; }

void MachineCheck::check() const {
    if (type == Type::Extractor) {
        if (value != "numeric" && value != "boxed" && value != "choice")
            throw std::invalid_argument("unknown extractor '" + value + "'");
        return;
    }
    try {
        std::regex re(value);
    } catch (const std::regex_error& e) {
        throw std::invalid_argument("invalid regex '" + value + "': " + e.what());
    }
}

bool MachineCheck::matches(std::string_view output) const {
    const std::string s = text::trim(output);
    if (type == Type::Regex) return std::regex_match(s, std::regex(value));
    if (value == "numeric") return std::regex_match(s, numeric_re());
    if (value == "boxed") return s.find("\\boxed{") != std::string::npos;
    return s.size() == 1 && s[0] >= 'A' && s[0] <= 'E';
}

std::string MachineCheck::str() const { return (type == Type::Regex ? "regex:" : "extractor:") + value; }

std::vector<const PriorEntry*> PriorSet::of_kind(PriorKind k) const {
    std::vector<const PriorEntry*> out;
    for (const auto& e : entries)
        if (e.kind == k) out.push_back(&e);
    return out;
}

json PriorSet::to_json() const {
    json arr = json::array();
    for (const auto& e : entries) {
        json j = {{"kind", std::string(distill::to_string(e.kind))},
                  {"text", e.text},
                  {"provenance", std::vector<std::string>(e.provenance.begin(), e.provenance.end())}};
        j["check"] = e.check ? json(e.check->str()) : json(nullptr);
        arr.push_back(std::move(j));
    }
    return {{"entries", std::move(arr)}};
}

PriorSet PriorSet::from_json(const json& j) {
    PriorSet out;
    try {
        for (const auto& je : j.at("entries")) {
            PriorEntry e;
            const std::string kind = je.at("kind").get<std::string>();
            if (kind == "heuristic") e.kind = PriorKind::Heuristic;
            else if (kind == "contract") e.kind = PriorKind::Contract;
            else throw DataError("priors: unknown entry kind '" + kind + "'");
            e.text = je.at("text").get<std::string>();
            for (const auto& p : je.at("provenance")) e.provenance.insert(p.get<std::string>());
            if (e.provenance.empty()) throw DataError("priors: entry without provenance: " + e.text);
            if (je.contains("check") && !je["check"].is_null()) {
                const std::string c = je["check"].get<std::string>();
                MachineCheck mc;
                if (text::starts_with(c, "regex:")) mc = {MachineCheck::Type::Regex, c.substr(6)};
                else if (text::starts_with(c, "extractor:")) mc = {MachineCheck::Type::Extractor, c.substr(10)};
                else throw DataError("priors: bad check '" + c + "'");
                try {
                    mc.check();
                } catch (const std::invalid_argument& err) {
                    throw DataError(std::string("priors: ") + err.what());
                }
                e.check = mc;
            }
            out.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed priors: ") + e.what());
    }
    return out;
}

PriorSet merge_priors(const std::vector<PriorFragment>& fragments) {
    std::map<std::pair<PriorKind, std::string>, PriorEntry> merged;
    for (const auto& frag : fragments) {
        for (PriorEntry e : frag.entries) {
            e.provenance.insert(frag.source_task);
            auto [it, fresh] = merged.try_emplace({e.kind, e.text}, e);
            if (fresh) continue;
            it->second.provenance.insert(e.provenance.begin(), e.provenance.end());
            if (!it->second.check) it->second.check = e.check;
        }
    }
    PriorSet out;
    for (auto& [key, e] : merged) out.entries.push_back(std::move(e));
    std::stable_sort(out.entries.begin(), out.entries.end(), [](const PriorEntry& a, const PriorEntry& b) {
        const std::string& sa = *a.provenance.begin();
        const std::string& sb = *b.provenance.begin();
        if (sa != sb) return sa < sb;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.text < b.text;
    });
    return out;
}

}  // namespace wfsynth::distill
