// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// On-disk recordings of gateway exchanges: one JSON file per fingerprint,
// `<dir>/<fingerprint>.json`.

#pragma once

#include <optional>
#include <string>

#include "wfsynth/gateway/types.hpp"

namespace wfsynth::gateway {

class FixtureStore {
public:
    explicit FixtureStore(std::string dir) : dir_(std::move(dir)) {}

    const std::string& dir() const { return dir_; }
    std::string path_for(const std::string& fingerprint) const;

    /// Returns the recorded exchange, or nullopt when no file exists. A file
    /// that exists but cannot be parsed throws DataError.
    std::optional<GatewayExchange> load(const std::string& fingerprint) const;
    void save(const GatewayExchange& ex) const;

private:
    std::string dir_;
};

}  // namespace wfsynth::gateway
