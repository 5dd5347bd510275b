// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/gateway/money.hpp"

#include <cmath>
#include <cstdlib>

#include "wfsynth/common/errors.hpp"

namespace wfsynth::gateway {

Money Money::from_dollars(long double dollars) {
    return Money(std::llroundl(dollars * kNanosPerDollar));
}

std::string Money::str() const {
    const std::int64_t mag = nanos_ < 0 ? -nanos_ : nanos_;
    std::string frac = std::to_string(mag % kNanosPerDollar);
    frac.insert(0, 9 - frac.size(), '0');
    return (nanos_ < 0 ? "-" : "") + std::to_string(mag / kNanosPerDollar) + "." + frac;
}

Pricing Pricing::from_per_mtok(double price_in, double price_out) {
    if (!(price_in >= 0) || !(price_out >= 0)) throw ConfigError("token prices must be non-negative");
    // $/Mtok * 1e9 nanos/$ / 1e6 tok/Mtok = $/Mtok * 1000 nanos/tok
    return Pricing{std::llround(price_in * 1000.0), std::llround(price_out * 1000.0)};
}

}  // namespace wfsynth::gateway
