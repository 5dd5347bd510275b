// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chat-completion front door with live, record and replay modes. Shareable
// across threads: live calls are bounded by an in-flight semaphore and the
// shared ledger is updated under a lock.

#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include "wfsynth/gateway/cost_ledger.hpp"
#include "wfsynth/gateway/fixture_store.hpp"
#include "wfsynth/gateway/transport.hpp"

namespace wfsynth::gateway {

enum class Mode { Live, Record, Replay };

std::string to_string(Mode m);
/// Throws ConfigError for anything but "live", "record", "replay".
Mode mode_from_string(const std::string& s);

struct GatewayOptions {
    Mode mode = Mode::Replay;
    std::string fixture_dir = "fixtures";
    int max_in_flight = 8;
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{500};
    /// Injected for tests; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

class Gateway {
public:
    /// `transport` may be null in replay mode.
    Gateway(GatewayOptions options, std::shared_ptr<Transport> transport, Pricing pricing);

    GatewayExchange complete(const std::vector<Message>& messages, const SamplingConfig& cfg);

    Mode mode() const { return options_.mode; }
    const Pricing& pricing() const { return pricing_; }
    const FixtureStore& fixtures() const { return store_; }

    /// Snapshot of every charge made through this gateway, in completion order.
    CostLedger ledger() const;
    /// Number of transport round trips attempted (0 in replay mode by construction).
    std::size_t transport_calls() const { return transport_calls_.load(); }

private:
    GatewayExchange call_transport(const std::vector<Message>& messages, const SamplingConfig& cfg,
                                   const std::string& fp);

    GatewayOptions options_;
    std::shared_ptr<Transport> transport_;
    Pricing pricing_;
    FixtureStore store_;
    std::counting_semaphore<> in_flight_;
    std::atomic<std::size_t> transport_calls_{0};
    mutable std::mutex ledger_mu_;
    CostLedger ledger_;
};

}  // namespace wfsynth::gateway
