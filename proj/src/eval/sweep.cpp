// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/eval/sweep.hpp"

#include <sstream>

#include "wfsynth/common/hash.hpp"
#include "wfsynth/common/jsonl.hpp"

namespace wfsynth::eval {

using nlohmann::json;

PipelineOutcome run_pipeline(const synth::TaskSpec& target, std::size_t k, const synth::Intervention& iv,
                             const PipelineInputs& in) {
    if (!in.registry || !in.priors || !in.dataset || !in.engine.gateway)
        throw ConfigError("pipeline needs a registry, priors, dataset and gateway");
    PipelineOutcome out;
    const auto catalog = synth::build_demo_catalog(*in.registry, in.trajectories_dir, target.task_id);
    out.pool = synth::build_demo_pool(target, catalog, k);
    out.pool = synth::apply_intervention(out.pool, iv, target, catalog);
    out.prompt = synth::compose_meta_prompt(target, out.pool, *in.priors, *in.registry, in.prompt);
    out.synthesis = synth::synthesize_workflow(target, out.prompt, *in.engine.gateway, in.engine.sampling);
    out.run = exec::execute_dataset(out.synthesis.program, in.dataset->instances, in.engine, in.parallelism);
    out.report = evaluate(out.run.results, *in.dataset, out.synthesis.program.name, in.engine.sandbox, in.scoring);
    return out;
}

std::vector<SweepRow> demo_sweep(const std::vector<std::size_t>& k_values,
                                 const std::function<PipelineOutcome(std::size_t)>& run_k) {
    std::vector<SweepRow> rows;
    for (const std::size_t k : k_values) {
        SweepRow row;
        row.k = k;
        try {
            const PipelineOutcome o = run_k(k);
            row.accuracy = o.report.accuracy.value_or(0.0);
            row.workflow_hash = sha256_hex(o.synthesis.dsl);
        } catch (const synth::SynthesisParseError& e) {
            row.accuracy = 0.0;
            row.error = e.what();
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_jsonl(const std::vector<SweepRow>& rows) {
    std::vector<json> out;
    for (const auto& r : rows) {
        json j = {{"k", r.k}, {"workflow_hash", r.workflow_hash}, {"error", r.error}};
        j["accuracy"] = r.accuracy ? json(*r.accuracy) : json(nullptr);
        out.push_back(std::move(j));
    }
    return jsonl::dump(out);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "k,accuracy,error\n";
    for (const auto& r : rows) {
        os << r.k << ',';
        if (r.accuracy) os << *r.accuracy;
        std::string err = r.error;
        for (auto& c : err)
            if (c == '\n' || c == '\r') c = ' ';
        std::string quoted;
        for (char c : err) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        os << ",\"" << quoted << "\"\n";
    }
    return os.str();
}

}  // namespace wfsynth::eval
