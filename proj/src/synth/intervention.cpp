// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/synth/intervention.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "wfsynth/common/text.hpp"

namespace wfsynth::synth {

namespace {

// Index draws use plain modulo so the permutation depends only on the
// engine's output sequence, which the standard fixes for mt19937_64.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

std::string replace_all_words(const std::string& text, const std::map<std::string, std::string>& mapping) {
    // Two-phase substitution through placeholders keeps the mapping a
    // bijection even if an alias equals some other source word.
    std::string out = text;
    std::size_t i = 0;
    for (const auto& [from, to] : mapping) out = text::replace_word(out, from, "\x01" + std::to_string(i++) + "\x01");
    i = 0;
    for (const auto& [from, to] : mapping) {
        const std::string ph = "\x01" + std::to_string(i++) + "\x01";
        for (std::size_t pos; (pos = out.find(ph)) != std::string::npos;) out.replace(pos, ph.size(), to);
    }
    return out;
}

}  // namespace

std::string to_string(InterventionMode m) {
    switch (m) {
        case InterventionMode::None: return "none";
        case InterventionMode::ZeroShot: return "zero_shot";
        case InterventionMode::Shuffled: return "shuffled";
        case InterventionMode::CrossDomain: return "cross_domain";
        case InterventionMode::RandomOps: return "random_ops";
    }
    return "none";
}

InterventionMode intervention_from_string(const std::string& s) {
    for (auto m : {InterventionMode::None, InterventionMode::ZeroShot, InterventionMode::Shuffled,
                   InterventionMode::CrossDomain, InterventionMode::RandomOps})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown intervention '" + s +
                      "' (expected none, zero_shot, shuffled, cross_domain or random_ops)");
}

std::string OpRenaming::apply(const std::string& text) const { return replace_all_words(text, forward); }

std::string OpRenaming::invert(const std::string& text) const {
    std::map<std::string, std::string> backward;
    for (const auto& [name, alias] : forward) backward[alias] = name;
    return replace_all_words(text, backward);
}

OpRenaming make_op_renaming(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    OpRenaming r;
    std::set<std::string> used;
    for (const auto kind : ir::kAllOperatorKinds) {
        std::string alias;
        do {
            alias = "op_";
            for (int i = 0; i < 8; ++i) alias += static_cast<char>('a' + draw(rng, 26));
        } while (!used.insert(alias).second);
        r.forward[std::string(ir::to_string(kind))] = alias;
    }
    return r;
}

std::string shuffle_lines(const std::string& text, std::uint64_t seed) {
    std::vector<std::string> lines = text::split_lines(text);
    std::mt19937_64 rng(seed);
    for (std::size_t i = lines.size(); i > 1; --i) std::swap(lines[i - 1], lines[draw(rng, i)]);
    std::string out = text::join(lines, "\n");
    // A blank line shuffled to the end needs a terminator or it would vanish on re-split.
    if ((!text.empty() && text.back() == '\n') || (!lines.empty() && lines.back().empty())) out += '\n';
    return out;
}

DemoPool apply_intervention(const DemoPool& pool, const Intervention& iv, const TaskSpec& target,
                            const DemoCatalog& catalog) {
    DemoPool out = pool;
    switch (iv.mode) {
        case InterventionMode::None: break;
        case InterventionMode::ZeroShot: out.demos.clear(); break;
        case InterventionMode::Shuffled:
            for (std::size_t i = 0; i < out.demos.size(); ++i)
                out.demos[i].dsl_text = shuffle_lines(out.demos[i].dsl_text, iv.seed + i);
            break;
        case InterventionMode::RandomOps: {
            const OpRenaming renaming = make_op_renaming(iv.seed);
            for (auto& d : out.demos) d.dsl_text = renaming.apply(d.dsl_text);
            break;
        }
        case InterventionMode::CrossDomain: {
            std::vector<const SourceDemos*> others;
            for (const auto& s : catalog)
                if (s.domain != target.domain_tag && s.task_id != target.task_id && !s.ranked.empty())
                    others.push_back(&s);
            if (others.empty()) throw CrossDomainUnavailable(target.task_id);
            std::stable_sort(others.begin(), others.end(), [](const SourceDemos* a, const SourceDemos* b) {
                return a->ranked.front().accuracy > b->ranked.front().accuracy;
            });
            const std::size_t n = out.demos.size();
            out.demos.clear();
            for (std::size_t round = 0; out.demos.size() < n; ++round) {
                bool any = false;
                for (const auto* s : others) {
                    if (round >= s->ranked.size() || out.demos.size() == n) continue;
                    any = true;
                    out.demos.push_back(s->ranked[round]);
                }
                if (!any) break;
            }
            std::stable_sort(out.demos.begin(), out.demos.end(),
                             [](const Demo& a, const Demo& b) { return a.accuracy > b.accuracy; });
            break;
        }
    }
    return out;
}

}  // namespace wfsynth::synth
