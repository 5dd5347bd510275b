// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/eval/cost_model.hpp"

#include <cmath>

namespace wfsynth::eval {

using gateway::Money;

namespace {

void check_non_negative(const AmortizationInputs& a) {
    if (a.c_search.nanos() < 0 || a.c_synth.nanos() < 0 || a.c_source.nanos() < 0 || a.n < 0)
        throw DegenerateInputs("amortization inputs must be non-negative");
}

}  // namespace

AmortizedCost amortized_cost(const AmortizationInputs& a) {
    check_non_negative(a);
    return {a.c_search * a.n, a.c_source + a.c_synth * a.n};
}

AmortizedCost amortized_cost_at(const AmortizationInputs& a, long double n) {
    check_non_negative(a);
    const auto search = n * static_cast<long double>(a.c_search.nanos());
    const auto amortized =
        static_cast<long double>(a.c_source.nanos()) + n * static_cast<long double>(a.c_synth.nanos());
    return {Money::from_nanos(std::llroundl(search)), Money::from_nanos(std::llroundl(amortized))};
}

long double break_even(const AmortizationInputs& a) {
    check_non_negative(a);
    if (a.c_search <= a.c_synth)
        throw DegenerateInputs("per-task search cost must exceed per-task synthesis cost for a break-even point");
    return static_cast<long double>(a.c_source.nanos()) /
           static_cast<long double>((a.c_search - a.c_synth).nanos());
}

}  // namespace wfsynth::eval
