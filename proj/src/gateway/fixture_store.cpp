// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/gateway/fixture_store.hpp"

#include <filesystem>

#include "wfsynth/common/text.hpp"

namespace wfsynth::gateway {

using nlohmann::json;

std::string FixtureStore::path_for(const std::string& fingerprint) const {
    return (std::filesystem::path(dir_) / (fingerprint + ".json")).string();
}

std::optional<GatewayExchange> FixtureStore::load(const std::string& fingerprint) const {
    const std::string path = path_for(fingerprint);
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
        const json j = json::parse(text::read_file(path));
        GatewayExchange ex;
        const json& req = j.at("request");
        ex.messages = messages_from_json(req.at("messages"));
        ex.sampling.model_id = req.at("model_id").get<std::string>();
        ex.sampling.temperature = req.at("temperature").get<double>();
        ex.sampling.max_output_tokens = req.value("max_output_tokens", ex.sampling.max_output_tokens);
        ex.response = j.at("response").get<std::string>();
        ex.tokens_in = j.at("tokens_in").get<std::int64_t>();
        ex.tokens_out = j.at("tokens_out").get<std::int64_t>();
        ex.fingerprint = fingerprint;
        ex.from_fixture = true;
        return ex;
    } catch (const json::exception& e) {
        throw DataError("malformed fixture " + path + ": " + e.what());
    }
}

void FixtureStore::save(const GatewayExchange& ex) const {
    const json j = {
        {"fingerprint", ex.fingerprint},
        {"request",
         {{"messages", messages_to_json(ex.messages)},
          {"model_id", ex.sampling.model_id},
          {"temperature", ex.sampling.temperature},
          {"max_output_tokens", ex.sampling.max_output_tokens}}},
        {"response", ex.response},
        {"tokens_in", ex.tokens_in},
        {"tokens_out", ex.tokens_out},
    };
    text::write_file(path_for(ex.fingerprint), j.dump(2) + "\n");
}

}  // namespace wfsynth::gateway
