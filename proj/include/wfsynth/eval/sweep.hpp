// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// The full synthesize -> execute -> evaluate pipeline for one target, and the
// demo-count sweep built on it.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wfsynth/distill/priors.hpp"
#include "wfsynth/eval/report.hpp"
#include "wfsynth/exec/engine.hpp"
#include "wfsynth/synth/intervention.hpp"
#include "wfsynth/synth/meta_prompt.hpp"
#include "wfsynth/synth/synthesizer.hpp"

namespace wfsynth::eval {

struct PipelineInputs {
    const synth::TaskRegistry* registry = nullptr;
    std::string trajectories_dir;
    const distill::PriorSet* priors = nullptr;
    const Dataset* dataset = nullptr;
    exec::EngineContext engine;
    int parallelism = 1;
    synth::PromptOptions prompt;
    ScoreOptions scoring;
};

struct PipelineOutcome {
    synth::DemoPool pool;
    synth::MetaPrompt prompt;
    synth::SynthesisResult synthesis;
    exec::DatasetRun run;
    AccuracyReport report;
};

/// Builds the leave-one-out pool (k = 0 gives an empty pool), applies the
/// intervention, synthesizes, runs the dataset and scores it. Synthesis and
/// data errors propagate.
PipelineOutcome run_pipeline(const synth::TaskSpec& target, std::size_t k, const synth::Intervention& iv,
                             const PipelineInputs& in);

struct SweepRow {
    std::size_t k = 0;
    std::optional<double> accuracy;  // 0 when synthesis failed; null on other errors
    std::string workflow_hash;       // sha256 of the synthesized program text
    std::string error;
};

/// Evaluates `run_k` for each k in order; a failure is recorded in its row and
/// the sweep continues.
std::vector<SweepRow> demo_sweep(const std::vector<std::size_t>& k_values,
                                 const std::function<PipelineOutcome(std::size_t)>& run_k);

std::string sweep_jsonl(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace wfsynth::eval
