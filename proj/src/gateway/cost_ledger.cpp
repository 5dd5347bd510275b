// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/gateway/cost_ledger.hpp"

namespace wfsynth::gateway {

Money CostLedger::charge(const GatewayExchange& ex) {
    if (ex.tokens_in == 0 && ex.tokens_out == 0) return Money();
    const Money cost = pricing_.cost(ex.tokens_in, ex.tokens_out);
    add({ex.fingerprint, cost});
    return cost;
}

void CostLedger::add(const ChargeEntry& entry) {
    per_call_.push_back(entry);
    total_ += entry.cost;
}

void CostLedger::merge(const CostLedger& other) {
    for (const auto& e : other.per_call_) add(e);
}

nlohmann::json CostLedger::to_json() const {
    nlohmann::json calls = nlohmann::json::array();
    for (const auto& e : per_call_) calls.push_back({{"fingerprint", e.fingerprint}, {"cost_nanos", e.cost.nanos()}});
    return {{"total_nanos", total_.nanos()}, {"total_usd", total_.str()}, {"calls", std::move(calls)}};
}

}  // namespace wfsynth::gateway
