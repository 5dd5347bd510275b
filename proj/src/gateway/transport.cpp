// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "wfsynth/gateway/transport.hpp"

namespace wfsynth::gateway {

using nlohmann::json;

namespace {

void split_url(const std::string& url, std::string& origin, std::string& path) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint_url must include a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        origin = url;
        path = "/";
    } else {
        origin = url.substr(0, path_start);
        path = url.substr(path_start);
    }
}

}  // namespace

json build_chat_request(const std::vector<Message>& messages, const SamplingConfig& cfg) {
    return {{"model", cfg.model_id},
            {"messages", messages_to_json(messages)},
            {"temperature", cfg.temperature},
            {"max_tokens", cfg.max_output_tokens},
            {"stream", false}};
}

TransportReply parse_chat_response(const std::string& body) {
    try {
        const json j = json::parse(body);
        TransportReply r;
        r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
            r.tokens_in = j["usage"].value("prompt_tokens", std::int64_t{0});
            r.tokens_out = j["usage"].value("completion_tokens", std::int64_t{0});
        }
        return r;
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed completion response: ") + e.what(), false);
    }
}

HttpTransport::HttpTransport(std::string endpoint_url, std::string api_key, int timeout_s)
    : api_key_(std::move(api_key)), timeout_s_(timeout_s) {
    split_url(endpoint_url, origin_, path_);
}

TransportReply HttpTransport::send(const std::vector<Message>& messages, const SamplingConfig& cfg) {
    httplib::Client client(origin_);
    client.set_connection_timeout(30);
    client.set_read_timeout(timeout_s_);
    client.set_write_timeout(timeout_s_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const auto res = client.Post(path_, headers, build_chat_request(messages, cfg).dump(), "application/json");
    if (!res) throw TransportError("request to " + origin_ + path_ + " failed: " + httplib::to_string(res.error()), true);
    if (res->status < 200 || res->status >= 300) {
        const bool retryable = res->status == 429 || res->status >= 500;
        throw TransportError("HTTP " + std::to_string(res->status) + " from " + origin_ + path_ + ": " +
                                 res->body.substr(0, 500),
                             retryable);
    }
    return parse_chat_response(res->body);
}

}  // namespace wfsynth::gateway
