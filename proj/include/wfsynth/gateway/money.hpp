// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Fixed-point currency. One unit is a nano-dollar so that a single token at
// common per-million prices is still a whole, non-zero amount.

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace wfsynth::gateway {

class Money {
public:
    static constexpr std::int64_t kNanosPerDollar = 1'000'000'000;

    constexpr Money() = default;
    static constexpr Money from_nanos(std::int64_t n) { return Money(n); }
    /// Rounds half away from zero to the nearest nano-dollar.
    static Money from_dollars(long double dollars);

    constexpr std::int64_t nanos() const { return nanos_; }
    long double dollars() const { return static_cast<long double>(nanos_) / kNanosPerDollar; }

    /// Fixed nine-decimal rendering, e.g. "0.000450000".
    std::string str() const;

    constexpr Money& operator+=(Money o) {
        nanos_ += o.nanos_;
        return *this;
    }
    friend constexpr Money operator+(Money a, Money b) { return a += b; }
    friend constexpr Money operator-(Money a, Money b) { return Money(a.nanos_ - b.nanos_); }
    friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.nanos_ * k); }
    friend constexpr auto operator<=>(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t n) : nanos_(n) {}
    std::int64_t nanos_ = 0;
};

/// Token prices in nano-dollars per token.
struct Pricing {
    std::int64_t in_nanos_per_token = 0;
    std::int64_t out_nanos_per_token = 0;

    /// Converts dollars-per-million-token prices; exact for prices with at most
    /// three decimals, otherwise rounded to the nearest nano-dollar per token.
    static Pricing from_per_mtok(double price_in, double price_out);

    Money cost(std::int64_t tokens_in, std::int64_t tokens_out) const {
        return Money::from_nanos(tokens_in * in_nanos_per_token + tokens_out * out_nanos_per_token);
    }

    friend bool operator==(const Pricing&, const Pricing&) = default;
};

}  // namespace wfsynth::gateway
