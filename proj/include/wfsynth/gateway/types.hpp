// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfsynth/common/errors.hpp"

namespace wfsynth::gateway {

struct Message {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

struct SamplingConfig {
    double temperature = 0.0;
    int max_output_tokens = 2048;
    std::string model_id;
};

struct GatewayExchange {
    std::vector<Message> messages;
    SamplingConfig sampling;
    std::string response;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
    double latency_s = 0.0;  // 0 when served from a fixture
    std::string fingerprint;
    bool from_fixture = false;
};

/// Stable request hash over (messages, model_id, temperature). max_output_tokens
/// is deliberately excluded so fixtures survive token-limit tuning.
std::string fingerprint(const std::vector<Message>& messages, const SamplingConfig& cfg);

nlohmann::json messages_to_json(const std::vector<Message>& messages);
std::vector<Message> messages_from_json(const nlohmann::json& j);

class GatewayError : public Error {
public:
    using Error::Error;

    const std::string& node_id() const { return node_id_; }
    void set_node_id(std::string id) { node_id_ = std::move(id); }

private:
    std::string node_id_;
};

/// Replay mode found no fixture for the request fingerprint.
class ReplayMissError : public GatewayError {
public:
    ReplayMissError(std::string fp)
        : GatewayError("no replay fixture for fingerprint " + fp), fingerprint_(std::move(fp)) {}
    const std::string& fingerprint() const { return fingerprint_; }

private:
    std::string fingerprint_;
};

/// Live network failure after retries, or a non-retryable HTTP status.
class TransportError : public GatewayError {
public:
    TransportError(const std::string& msg, bool retryable) : GatewayError(msg), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

}  // namespace wfsynth::gateway
