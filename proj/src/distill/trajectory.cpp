// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/distill/trajectory.hpp"

#include <filesystem>
#include <set>

#include "wfsynth/common/jsonl.hpp"
#include "wfsynth/common/text.hpp"

namespace wfsynth::distill {

using nlohmann::json;

std::vector<TrajectoryRecord> parse_trajectory(const std::string& contents, const std::string& task_id,
                                               const std::string& origin) {
    std::vector<TrajectoryRecord> out;
    for (const auto& [line, j] : jsonl::parse(contents, origin)) {
        const std::string where = origin + ":" + std::to_string(line);
        TrajectoryRecord r;
        r.task_id = task_id;
        try {
            r.workflow_dsl = j.at("workflow_dsl").get<std::string>();
            r.accuracy = j.at("accuracy").get<double>();
            if (j.contains("error_log")) r.error_log = j["error_log"].get<std::vector<std::string>>();
            r.iteration = j.value("iteration", static_cast<int>(out.size()));
        } catch (const json::exception& e) {
            throw DataError(where + ": bad trajectory record: " + e.what());
        }
        if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0)) throw DataError(where + ": accuracy outside [0, 1]");
        out.push_back(std::move(r));
    }
    return out;
}

std::string trajectory_path(const std::string& dir, const std::string& task_id) {
    return (std::filesystem::path(dir) / (task_id + ".jsonl")).string();
}

std::vector<TrajectoryRecord> load_trajectory(const std::string& dir, const std::string& task_id) {
    const std::string path = trajectory_path(dir, task_id);
    if (!std::filesystem::exists(path)) throw DataError("trajectory store not found: " + path);
    return parse_trajectory(text::read_file(path), task_id, path);
}

void DistillConfig::check() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0, 1]");
}

ContrastiveTriplet select_contrastive_triplet(const std::vector<TrajectoryRecord>& tau, const DistillConfig& cfg) {
    cfg.check();
    if (tau.empty()) throw EmptyTrajectoryError("");
    ContrastiveTriplet t;
    t.task_id = tau.front().task_id;
    for (std::size_t i = 1; i < tau.size(); ++i)
        if (tau[i].accuracy > tau[t.best].accuracy) t.best = i;

    const double bound = cfg.gamma * tau[t.best].accuracy;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double acc = tau[i].accuracy;
        if (acc > 0.0 && acc < bound && (!t.low || acc < tau[*t.low].accuracy)) t.low = i;
        if (acc == 0.0 && !t.zero) t.zero = i;
    }

    t.w_best = tau[t.best];
    if (t.low) {
        t.w_low = tau[*t.low];
        t.evidence_low = extract_error_evidence(*t.w_low, cfg.max_evidence_chars);
    }
    if (t.zero) {
        t.w_zero = tau[*t.zero];
        t.evidence_zero = extract_error_evidence(*t.w_zero, cfg.max_evidence_chars);
    }
    return t;
}

std::string extract_error_evidence(const TrajectoryRecord& r, std::size_t max_chars) {
    std::set<std::string> seen;
    std::string out;
    for (const auto& entry : r.error_log) {
        if (!seen.insert(entry).second) continue;
        const std::size_t added = entry.size() + (out.empty() ? 0 : 1);
        if (out.size() + added > max_chars) break;
        if (!out.empty()) out += '\n';
        out += entry;
    }
    return out;
}

}  // namespace wfsynth::distill
