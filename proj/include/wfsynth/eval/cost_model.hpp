// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cost of per-task search versus one-off prior construction plus cheap
// per-task synthesis, and the task count at which the two break even.

#pragma once

#include <cstdint>

#include "wfsynth/common/errors.hpp"
#include "wfsynth/gateway/money.hpp"

namespace wfsynth::eval {

struct AmortizationInputs {
    gateway::Money c_search;  // per task
    gateway::Money c_synth;   // per task
    gateway::Money c_source;  // one-off
    std::int64_t n = 0;       // task count
};

struct AmortizedCost {
    gateway::Money search_total;     // n * c_search
    gateway::Money amortized_total;  // c_source + n * c_synth
};

class DegenerateInputs : public Error {
public:
    using Error::Error;
};

/// Exact fixed-point evaluation. Throws DegenerateInputs on negative inputs.
AmortizedCost amortized_cost(const AmortizationInputs& a);

/// Both totals at a real-valued task count, rounded to the nearest nano-dollar.
AmortizedCost amortized_cost_at(const AmortizationInputs& a, long double n);

/// n* = c_source / (c_search - c_synth). Throws DegenerateInputs unless
/// c_search > c_synth.
long double break_even(const AmortizationInputs& a);

}  // namespace wfsynth::eval
