// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Gateway settings read from the JSON config file. The only value taken from
// the environment is the API key, looked up under the variable named by
// `api_key_env`.

#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "wfsynth/gateway/gateway.hpp"

namespace wfsynth::gateway {

struct GatewayConfig {
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string model_id = "gpt-4o-mini";
    double price_in_per_mtok = 0.15;
    double price_out_per_mtok = 0.60;
    Mode mode = Mode::Replay;
    int max_in_flight = 8;
    int max_output_tokens = 2048;
    int request_timeout_s = 120;

    Pricing pricing() const { return Pricing::from_per_mtok(price_in_per_mtok, price_out_per_mtok); }
    SamplingConfig sampling(double temperature = 0.0) const {
        return SamplingConfig{temperature, max_output_tokens, model_id};
    }
};

/// Reads the gateway keys from a config object; unknown keys are ignored so
/// the same file can carry settings for other modules. Throws ConfigError.
GatewayConfig gateway_config_from_json(const nlohmann::json& j);

/// Builds a gateway for `cfg`. Live and record modes construct an HTTP
/// transport and require the API key variable to be set; replay never does.
std::unique_ptr<Gateway> make_gateway(const GatewayConfig& cfg, const std::string& fixture_dir);

}  // namespace wfsynth::gateway
