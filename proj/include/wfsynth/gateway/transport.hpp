// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfsynth/gateway/types.hpp"

namespace wfsynth::gateway {

struct TransportReply {
    std::string text;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
};

/// One network round trip. Implementations throw TransportError; the gateway
/// owns retry policy.
class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportReply send(const std::vector<Message>& messages, const SamplingConfig& cfg) = 0;
};

/// OpenAI-compatible `chat/completions` client. `endpoint_url` is the full URL
/// of the completions resource, e.g. https://api.openai.com/v1/chat/completions.
class HttpTransport : public Transport {
public:
    HttpTransport(std::string endpoint_url, std::string api_key, int timeout_s = 120);
    TransportReply send(const std::vector<Message>& messages, const SamplingConfig& cfg) override;

private:
    std::string origin_;  // scheme://host[:port]
    std::string path_;
    std::string api_key_;
    int timeout_s_;
};

/// Builds the request body sent by HttpTransport (exposed for tests).
nlohmann::json build_chat_request(const std::vector<Message>& messages, const SamplingConfig& cfg);
/// Parses an OpenAI-style response body; throws TransportError when malformed.
TransportReply parse_chat_response(const std::string& body);

}  // namespace wfsynth::gateway
