// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/distill/distiller.hpp"

#include <sstream>
#include <stdexcept>

#include "wfsynth/common/text.hpp"

namespace wfsynth::distill {

using gateway::Message;

namespace {

constexpr const char* kFormatSpec =
    "Reply in exactly this format and nothing else:\n"
    "HEURISTICS:\n"
    "- <one operator-composition rule per line>\n"
    "CONTRACTS:\n"
    "- <one output-format constraint per line>\n"
    "A contract line may end with a machine check: |regex:<pattern> or "
    "|extractor:numeric, |extractor:boxed, |extractor:choice.";

std::string format_accuracy(double a) {
    std::ostringstream os;
    os.precision(4);
    os << a;
    return os.str();
}

void render_record(std::ostringstream& os, const std::string& title, const TrajectoryRecord& r) {
    os << "## " << title << " (accuracy " << format_accuracy(r.accuracy) << ")\n```wf\n" << r.workflow_dsl;
    if (!r.workflow_dsl.empty() && r.workflow_dsl.back() != '\n') os << '\n';
    os << "```\n\n";
}

void parse_entry(const std::string& body, PriorKind kind, PriorFragment& frag, const std::string& raw) {
    PriorEntry e;
    e.kind = kind;
    e.provenance.insert(frag.source_task);
    std::string text = body;
    if (kind == PriorKind::Contract) {
        for (const auto& [tag, type] : {std::pair{"|regex:", MachineCheck::Type::Regex},
                                       std::pair{"|extractor:", MachineCheck::Type::Extractor}}) {
            const auto pos = body.rfind(tag);
            if (pos == std::string::npos) continue;
            MachineCheck mc{type, text::trim(body.substr(pos + std::string(tag).size()))};
            try {
                mc.check();
            } catch (const std::invalid_argument& err) {
                throw FormatError(std::string("bad machine check: ") + err.what(), raw);
            }
            e.check = mc;
            text = body.substr(0, pos);
            break;
        }
    }
    e.text = text::trim(text);
    if (e.text.empty()) throw FormatError("empty entry", raw);
    frag.entries.push_back(std::move(e));
}

}  // namespace

std::string reflection_prompt(const ContrastiveTriplet& trip) {
    std::ostringstream os;
    os << "You are analysing the search history of agent workflows for task '" << trip.task_id << "'.\n"
       << "Compare the best workflow with the failing ones and distil reusable lessons:\n"
       << "compositional heuristics (how to combine operators) and output contracts "
       << "(formatting constraints the final output must satisfy).\n\n";
    render_record(os, "Best workflow", trip.w_best);
    if (trip.w_low) {
        render_record(os, "Low-scoring workflow", *trip.w_low);
        os << "### Errors of the low-scoring workflow\n" << (trip.evidence_low.empty() ? "(none)" : trip.evidence_low)
           << "\n\n";
    } else {
        os << "## Low-scoring workflow\n(none in the trajectory)\n\n";
    }
    if (trip.w_zero) {
        render_record(os, "Collapsed workflow", *trip.w_zero);
        os << "### Errors of the collapsed workflow\n"
           << (trip.evidence_zero.empty() ? "(none)" : trip.evidence_zero) << "\n\n";
    } else {
        os << "## Collapsed workflow\n(none in the trajectory)\n\n";
    }
    os << kFormatSpec;
    return os.str();
}

std::string repair_prompt(const std::string& problem) {
    return "Your reply could not be parsed (" + problem + ").\n" + kFormatSpec;
}

PriorFragment parse_reflection(const std::string& response, const std::string& source_task) {
    PriorFragment frag;
    frag.source_task = source_task;
    enum class Section { Preamble, Heuristics, Contracts } section = Section::Preamble;
    bool saw_heuristics = false;
    bool saw_contracts = false;
    for (const auto& raw_line : text::split_lines(response)) {
        const std::string line = text::trim(raw_line);
        if (line == "HEURISTICS:") {
            if (saw_heuristics || saw_contracts) throw FormatError("HEURISTICS section out of order", response);
            saw_heuristics = true;
            section = Section::Heuristics;
            continue;
        }
        if (line == "CONTRACTS:") {
            if (!saw_heuristics || saw_contracts) throw FormatError("CONTRACTS section out of order", response);
            saw_contracts = true;
            section = Section::Contracts;
            continue;
        }
        if (line.empty() || section == Section::Preamble) continue;
        if (!text::starts_with(line, "- ")) throw FormatError("expected '- ' entry, got: " + line, response);
        parse_entry(line.substr(2), section == Section::Heuristics ? PriorKind::Heuristic : PriorKind::Contract, frag,
                    response);
    }
    if (!saw_heuristics) throw FormatError("missing HEURISTICS: section", response);
    return frag;
}

PriorFragment distill_priors(const ContrastiveTriplet& trip, gateway::Gateway& gw,
                             const gateway::SamplingConfig& sampling) {
    std::vector<Message> messages{{"user", reflection_prompt(trip)}};
    const auto first = gw.complete(messages, sampling);
    try {
        return parse_reflection(first.response, trip.task_id);
    } catch (const FormatError& e) {
        messages.push_back({"assistant", first.response});
        messages.push_back({"user", repair_prompt(e.what())});
    }
    const auto second = gw.complete(messages, sampling);
    try {
        return parse_reflection(second.response, trip.task_id);
    } catch (const FormatError& e) {
        throw FormatError(std::string("reflection reply malformed after repair: ") + e.what(),
                          "--- reply 1 ---\n" + first.response + "\n--- reply 2 ---\n" + second.response);
    }
}

PriorSet distill_tasks(const std::vector<std::string>& task_ids, const std::string& trajectories_dir,
                       const DistillConfig& cfg, gateway::Gateway& gw, const gateway::SamplingConfig& sampling,
                       std::vector<TripletSummary>* summaries) {
    std::vector<PriorFragment> fragments;
    for (const auto& id : task_ids) {
        const auto tau = load_trajectory(trajectories_dir, id);
        if (tau.empty()) throw EmptyTrajectoryError(id);
        const auto trip = select_contrastive_triplet(tau, cfg);
        fragments.push_back(distill_priors(trip, gw, sampling));
        if (summaries) {
            TripletSummary s{id, tau.size(), trip.w_best.accuracy, std::nullopt, std::nullopt, 0, 0};
            if (trip.w_low) s.low = trip.w_low->accuracy;
            if (trip.w_zero) s.zero = trip.w_zero->accuracy;
            for (const auto& e : fragments.back().entries) (e.kind == PriorKind::Heuristic ? s.heuristics : s.contracts)++;
            summaries->push_back(std::move(s));
        }
    }
    return merge_priors(fragments);
}

}  // namespace wfsynth::distill
