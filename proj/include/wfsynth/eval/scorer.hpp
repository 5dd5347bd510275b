// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "wfsynth/eval/dataset.hpp"
#include "wfsynth/exec/engine.hpp"
#include "wfsynth/runtime/sandbox.hpp"

namespace wfsynth::eval {

struct ScoreResult {
    bool correct = false;
    std::string normalized_pred;
    std::string normalized_gold;
    /// The prediction is exactly in the expected final form (e.g. a bare
    /// number), not merely extractable from surrounding text.
    bool contract_compliant = true;
    /// Set when no answer could be extracted (workflow) or the sandbox failed (env).
    std::optional<exec::ErrorCategory> category;
};

struct ScoreOptions {
    double numeric_rel_tol = 1e-6;
    double f1_threshold = 0.3;
    double sandbox_timeout_s = 10.0;
};

/// Scores one prediction. code-tests needs `sandbox` and `inst` (entry point
/// and tests); the other scorers are pure functions of (predicted, gold).
ScoreResult score(ScorerKind kind, const std::string& predicted, const nlohmann::json& gold,
                  runtime::Sandbox* sandbox = nullptr, const exec::TaskInstance* inst = nullptr,
                  const ScoreOptions& opts = {});

/// Last number token (commas dropped), e.g. "The answer is 1,234." -> "1234".
std::optional<std::string> extract_last_number(std::string_view s);
/// Contents of the last `\boxed{...}` with balanced braces.
std::optional<std::string> extract_last_boxed(std::string_view s);
/// Final standalone capital letter A-E.
std::optional<char> extract_choice_letter(std::string_view s);
/// Canonical text for comparing boxed answers.
std::string normalize_math(std::string_view s);
/// SQuAD-style answer normalization and token F1.
std::string normalize_answer_text(std::string_view s);
double token_f1(std::string_view predicted, std::string_view gold);

}  // namespace wfsynth::eval
