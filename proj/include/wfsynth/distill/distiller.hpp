// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reflection step: turns a contrastive triplet into heuristics and contracts
// with one model call, and folds per-task results into a PriorSet.

#pragma once

#include <string>
#include <vector>

#include "wfsynth/distill/priors.hpp"
#include "wfsynth/distill/trajectory.hpp"
#include "wfsynth/gateway/gateway.hpp"

namespace wfsynth::distill {

std::string reflection_prompt(const ContrastiveTriplet& trip);
std::string repair_prompt(const std::string& problem);

/// Parses the delimited reflection reply:
///
///   HEURISTICS:
///   - <rule>
///   CONTRACTS:
///   - <constraint> [|regex:<pattern> | |extractor:numeric|boxed|choice]
///
/// The HEURISTICS header is required; CONTRACTS is optional. Text before the
/// first header is ignored. Throws FormatError on any other deviation.
PriorFragment parse_reflection(const std::string& response, const std::string& source_task);

/// Issues the reflection call. A reply that fails to parse gets exactly one
/// repair request; a second failure throws FormatError carrying both replies.
PriorFragment distill_priors(const ContrastiveTriplet& trip, gateway::Gateway& gw,
                             const gateway::SamplingConfig& sampling);

struct TripletSummary {
    std::string task_id;
    std::size_t records = 0;
    double best = 0.0;
    std::optional<double> low;
    std::optional<double> zero;
    std::size_t heuristics = 0;
    std::size_t contracts = 0;
};

/// Runs selection + reflection for each source task in order and merges.
PriorSet distill_tasks(const std::vector<std::string>& task_ids, const std::string& trajectories_dir,
                       const DistillConfig& cfg, gateway::Gateway& gw, const gateway::SamplingConfig& sampling,
                       std::vector<TripletSummary>* summaries = nullptr);

}  // namespace wfsynth::distill
