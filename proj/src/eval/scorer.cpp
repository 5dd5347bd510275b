// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/eval/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>

#include "wfsynth/common/text.hpp"

namespace wfsynth::eval {

using exec::ErrorCategory;
using nlohmann::json;

namespace {

const std::regex& number_re() {
    static const std::regex re(R"(-?\d[\d,]*(?:\.\d+)?|-?\.\d+)");
    return re;
}

std::string gold_text(const json& gold) {
    if (gold.is_string()) return gold.get<std::string>();
    if (gold.is_number_integer()) return std::to_string(gold.get<long long>());
    if (gold.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << gold.get<double>();
        return os.str();
    }
    return gold.dump();
}

std::string canonical_number(const std::string& s) {
    std::ostringstream os;
    os.precision(15);
    os << std::stod(s);
    return os.str();
}

ScoreResult score_numeric(const std::string& predicted, const json& gold, const ScoreOptions& opts) {
    ScoreResult r;
    const auto g = extract_last_number(gold_text(gold));
    if (!g) throw DataError("gold answer has no number: " + gold_text(gold));
    r.normalized_gold = canonical_number(*g);
    const auto p = extract_last_number(predicted);
    r.contract_compliant = std::regex_match(text::trim(predicted), number_re());
    if (!p) {
        r.category = ErrorCategory::Workflow;
        return r;
    }
    r.normalized_pred = canonical_number(*p);
    const double pv = std::stod(*p);
    const double gv = std::stod(*g);
    r.correct = pv == gv || std::fabs(pv - gv) <= opts.numeric_rel_tol * std::fabs(gv);
    return r;
}

ScoreResult score_boxed(const std::string& predicted, const json& gold) {
    ScoreResult r;
    const std::string gt = gold_text(gold);
    r.normalized_gold = normalize_math(extract_last_boxed(gt).value_or(gt));
    const auto p = extract_last_boxed(predicted);
    if (!p) {
        r.contract_compliant = false;
        r.category = ErrorCategory::Workflow;
        return r;
    }
    r.normalized_pred = normalize_math(*p);
    r.correct = r.normalized_pred == r.normalized_gold;
    return r;
}

ScoreResult score_choice(const std::string& predicted, const json& gold) {
    ScoreResult r;
    const auto g = extract_choice_letter(text::trim(gold_text(gold)));
    if (!g) throw DataError("gold answer is not a letter A-E: " + gold_text(gold));
    r.normalized_gold = std::string(1, *g);
    const auto p = extract_choice_letter(predicted);
    const std::string t = text::trim(predicted);
    r.contract_compliant = t.size() == 1 || (t.size() == 3 && t.front() == '(' && t.back() == ')');
    if (!p) {
        r.category = ErrorCategory::Workflow;
        return r;
    }
    r.normalized_pred = std::string(1, *p);
    r.correct = *p == *g;
    return r;
}

ScoreResult score_f1(const std::string& predicted, const json& gold, const ScoreOptions& opts) {
    ScoreResult r;
    std::vector<std::string> golds;
    if (gold.is_array())
        for (const auto& g : gold) golds.push_back(gold_text(g));
    else golds.push_back(gold_text(gold));
    if (golds.empty()) throw DataError("empty gold answer list");
    r.normalized_pred = normalize_answer_text(predicted);
    double best = -1.0;
    for (const auto& g : golds) {
        const double f1 = token_f1(predicted, g);
        if (f1 > best) {
            best = f1;
            r.normalized_gold = normalize_answer_text(g);
        }
    }
    if (r.normalized_pred.empty()) {
        r.category = ErrorCategory::Workflow;
        return r;
    }
    r.correct = best >= opts.f1_threshold;
    return r;
}

ScoreResult score_code(const std::string& predicted, runtime::Sandbox* sandbox, const exec::TaskInstance* inst,
                       const ScoreOptions& opts) {
    if (!sandbox || !inst || !inst->entry_point) throw ConfigError("code-tests scoring needs a sandbox and an entry point");
    ScoreResult r;
    r.normalized_gold = std::to_string(inst->tests.size()) + " tests";
    const std::string code = text::last_fenced_block(predicted).value_or(predicted);
    if (text::trim(code).empty()) {
        r.category = ErrorCategory::Workflow;
        return r;
    }
    if (inst->tests.empty()) {
        r.normalized_pred = "pass (vacuous)";
        r.correct = true;
        return r;
    }
    runtime::SandboxRequest req;
    req.op = runtime::SandboxOp::Test;
    req.code = code;
    req.entry_point = *inst->entry_point;
    req.tests = inst->tests;
    req.timeout_s = opts.sandbox_timeout_s;
    runtime::SandboxVerdict v;
    try {
        v = sandbox->run(req);
    } catch (const runtime::SandboxError& e) {
        r.normalized_pred = e.category();
        r.category = ErrorCategory::Env;
        return r;
    }
    if (v.category && runtime::is_env_category(*v.category)) {
        r.normalized_pred = *v.category;
        r.category = ErrorCategory::Env;
        return r;
    }
    r.correct = v.status == runtime::VerdictStatus::Pass;
    r.normalized_pred = r.correct ? "pass" : v.category.value_or("fail");
    return r;
}

}  // namespace

std::optional<std::string> extract_last_number(std::string_view s) {
    const std::string str(s);
    std::optional<std::string> last;
    for (auto it = std::sregex_iterator(str.begin(), str.end(), number_re()); it != std::sregex_iterator(); ++it) {
        last = it->str();
    }
    if (!last) return std::nullopt;
    std::string out;
    for (char c : *last)
        if (c != ',') out += c;
    return out;
}

std::optional<std::string> extract_last_boxed(std::string_view s) {
    static constexpr std::string_view kTag = "\\boxed{";
    const auto pos = s.rfind(kTag);
    if (pos == std::string_view::npos) return std::nullopt;
    int depth = 1;
    const std::size_t begin = pos + kTag.size();
    for (std::size_t i = begin; i < s.size(); ++i) {
        if (s[i] == '{') ++depth;
        else if (s[i] == '}' && --depth == 0) return std::string(s.substr(begin, i - begin));
    }
    return std::nullopt;
}

std::optional<char> extract_choice_letter(std::string_view s) {
    for (std::size_t i = s.size(); i-- > 0;) {
        const char c = s[i];
        if (c < 'A' || c > 'E') continue;
        const bool left = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
        const bool right = i + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1]));
        if (left && right) return c;
    }
    return std::nullopt;
}

std::string normalize_math(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{
             {"\\dfrac", "\\frac"}, {"\\tfrac", "\\frac"}, {"\\left", ""}, {"\\right", ""}, {"\\!", ""}, {"$", ""}}) {
        for (std::size_t p; (p = out.find(from)) != std::string::npos;) out.replace(p, from.size(), to);
    }
    while (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

std::string normalize_answer_text(std::string_view s) {
    std::string cleaned;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        if (std::ispunct(u)) continue;
        cleaned += static_cast<char>(std::tolower(u));
    }
    std::istringstream in(cleaned);
    std::string word, out;
    while (in >> word) {
        if (word == "a" || word == "an" || word == "the") continue;
        if (!out.empty()) out += ' ';
        out += word;
    }
    return out;
}

double token_f1(std::string_view predicted, std::string_view gold) {
    auto tokens = [](std::string_view s) {
        std::istringstream in(normalize_answer_text(s));
        std::vector<std::string> out;
        for (std::string w; in >> w;) out.push_back(w);
        return out;
    };
    const auto p = tokens(predicted);
    const auto g = tokens(gold);
    if (p.empty() || g.empty()) return p.empty() && g.empty() ? 1.0 : 0.0;
    std::map<std::string, int> counts;
    for (const auto& t : g) ++counts[t];
    int common = 0;
    for (const auto& t : p)
        if (counts[t]-- > 0) ++common;
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(p.size());
    const double recall = static_cast<double>(common) / static_cast<double>(g.size());
    return 2 * precision * recall / (precision + recall);
}

ScoreResult score(ScorerKind kind, const std::string& predicted, const json& gold, runtime::Sandbox* sandbox,
                  const exec::TaskInstance* inst, const ScoreOptions& opts) {
    switch (kind) {
        case ScorerKind::NumericExact: return score_numeric(predicted, gold, opts);
        case ScorerKind::BoxedMatch: return score_boxed(predicted, gold);
        case ScorerKind::ChoiceLetter: return score_choice(predicted, gold);
        case ScorerKind::CodeTests: return score_code(predicted, sandbox, inst, opts);
        case ScorerKind::TextF1: return score_f1(predicted, gold, opts);
    }
    return {};
}

}  // namespace wfsynth::eval
