// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Search histories of source tasks and contrastive selection over them.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wfsynth/common/errors.hpp"

namespace wfsynth::distill {

struct TrajectoryRecord {
    std::string task_id;
    std::string workflow_dsl;
    double accuracy = 0.0;               // in [0, 1]
    std::vector<std::string> error_log;  // verbatim captures
    int iteration = 0;
};

class EmptyTrajectoryError : public DataError {
public:
    explicit EmptyTrajectoryError(const std::string& task_id)
        : DataError(task_id.empty() ? "trajectory is empty" : "trajectory for task '" + task_id + "' is empty") {}
};

/// Parses a JSON-lines trajectory (`{workflow_dsl, accuracy, error_log, iteration}`
/// per line). Throws DataError naming the origin and line on bad records.
std::vector<TrajectoryRecord> parse_trajectory(const std::string& contents, const std::string& task_id,
                                               const std::string& origin);

/// Loads `<dir>/<task_id>.jsonl`. Throws DataError naming the path when missing.
std::vector<TrajectoryRecord> load_trajectory(const std::string& dir, const std::string& task_id);
std::string trajectory_path(const std::string& dir, const std::string& task_id);

struct DistillConfig {
    double gamma = 0.6;
    std::size_t max_evidence_chars = 4000;

    /// Throws ConfigError unless 0 < gamma <= 1.
    void check() const;
};

struct ContrastiveTriplet {
    std::string task_id;
    std::size_t best = 0;
    std::optional<std::size_t> low;
    std::optional<std::size_t> zero;
    TrajectoryRecord w_best;
    std::optional<TrajectoryRecord> w_low;
    std::optional<TrajectoryRecord> w_zero;
    std::string evidence_low;
    std::string evidence_zero;
};

/// best: highest accuracy (earliest on ties); low: lowest accuracy strictly
/// inside (0, gamma * best) (earliest on ties); zero: first record with
/// accuracy 0. Throws EmptyTrajectoryError.
ContrastiveTriplet select_contrastive_triplet(const std::vector<TrajectoryRecord>& tau, const DistillConfig& cfg);

/// Deduplicated error entries joined by newlines, in original order. Stops
/// before the first entry that would push the text past `max_chars`.
std::string extract_error_evidence(const TrajectoryRecord& r, std::size_t max_chars);

}  // namespace wfsynth::distill
