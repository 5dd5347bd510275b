// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/gateway/money.hpp"
#include "wfsynth/gateway/types.hpp"

namespace wfsynth::gateway {

struct ChargeEntry {
    std::string fingerprint;
    Money cost;

    friend bool operator==(const ChargeEntry&, const ChargeEntry&) = default;
};

/// Token cost accumulator. `total` always equals the sum of `per_call`.
/// Not synchronized; callers that share a ledger serialize access.
class CostLedger {
public:
    CostLedger() = default;
    explicit CostLedger(Pricing pricing) : pricing_(pricing) {}

    const Pricing& pricing() const { return pricing_; }
    Money total() const { return total_; }
    const std::vector<ChargeEntry>& per_call() const { return per_call_; }

    /// Adds the exchange's cost. Exchanges with zero tokens leave the ledger unchanged.
    Money charge(const GatewayExchange& ex);
    /// Adds a precomputed entry (used when merging ledgers).
    void add(const ChargeEntry& entry);
    void merge(const CostLedger& other);

    nlohmann::json to_json() const;

    friend bool operator==(const CostLedger&, const CostLedger&) = default;

private:
    Pricing pricing_;
    Money total_;
    std::vector<ChargeEntry> per_call_;
};

}  // namespace wfsynth::gateway
