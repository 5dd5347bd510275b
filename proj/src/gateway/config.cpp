// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/gateway/config.hpp"

#include <cstdlib>

namespace wfsynth::gateway {

using nlohmann::json;

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace

GatewayConfig gateway_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    GatewayConfig cfg;
    read_key(j, "endpoint_url", cfg.endpoint_url);
    read_key(j, "api_key_env", cfg.api_key_env);
    read_key(j, "model_id", cfg.model_id);
    read_key(j, "price_in_per_mtok", cfg.price_in_per_mtok);
    read_key(j, "price_out_per_mtok", cfg.price_out_per_mtok);
    read_key(j, "max_in_flight", cfg.max_in_flight);
    read_key(j, "max_output_tokens", cfg.max_output_tokens);
    read_key(j, "request_timeout_s", cfg.request_timeout_s);
    std::string mode = to_string(cfg.mode);
    read_key(j, "mode", mode);
    cfg.mode = mode_from_string(mode);

    if (cfg.price_in_per_mtok < 0 || cfg.price_out_per_mtok < 0) throw ConfigError("prices must be non-negative");
    if (cfg.max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
    if (cfg.max_output_tokens < 1) throw ConfigError("max_output_tokens must be at least 1");
    if (cfg.request_timeout_s < 1) throw ConfigError("request_timeout_s must be at least 1");
    return cfg;
}

std::unique_ptr<Gateway> make_gateway(const GatewayConfig& cfg, const std::string& fixture_dir) {
    GatewayOptions opts;
    opts.mode = cfg.mode;
    opts.fixture_dir = fixture_dir;
    opts.max_in_flight = cfg.max_in_flight;
    std::shared_ptr<Transport> transport;
    if (cfg.mode != Mode::Replay) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (key == nullptr || *key == '\0')
            throw ConfigError("environment variable " + cfg.api_key_env + " is not set (required in " +
                              to_string(cfg.mode) + " mode)");
        transport = std::make_shared<HttpTransport>(cfg.endpoint_url, key, cfg.request_timeout_s);
    }
    return std::make_unique<Gateway>(std::move(opts), std::move(transport), cfg.pricing());
}

}  // namespace wfsynth::gateway
