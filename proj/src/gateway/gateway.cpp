// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "wfsynth/gateway/gateway.hpp"

#include <thread>

#include "wfsynth/common/hash.hpp"

namespace wfsynth::gateway {

using nlohmann::json;

json messages_to_json(const std::vector<Message>& messages) {
    json arr = json::array();
    for (const auto& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
    return arr;
}

std::vector<Message> messages_from_json(const json& j) {
    std::vector<Message> out;
    for (const auto& m : j) out.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    return out;
}

std::string fingerprint(const std::vector<Message>& messages, const SamplingConfig& cfg) {
    const json key = {{"messages", messages_to_json(messages)},
                      {"model_id", cfg.model_id},
                      {"temperature", cfg.temperature}};
    return sha256_hex(key.dump());
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::Live: return "live";
        case Mode::Record: return "record";
        case Mode::Replay: return "replay";
    }
    return "replay";
}

Mode mode_from_string(const std::string& s) {
    if (s == "live") return Mode::Live;
    if (s == "record") return Mode::Record;
    if (s == "replay") return Mode::Replay;
    throw ConfigError("unknown gateway mode '" + s + "' (expected live, record or replay)");
}

Gateway::Gateway(GatewayOptions options, std::shared_ptr<Transport> transport, Pricing pricing)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      pricing_(pricing),
      store_(options_.fixture_dir),
      in_flight_(options_.max_in_flight > 0 ? options_.max_in_flight : 1),
      ledger_(pricing) {
    if (options_.max_in_flight <= 0) throw ConfigError("max_in_flight must be positive");
    if (options_.max_attempts <= 0) throw ConfigError("max_attempts must be positive");
    if (options_.mode != Mode::Replay && !transport_) throw ConfigError("live and record modes need a transport");
    if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

GatewayExchange Gateway::complete(const std::vector<Message>& messages, const SamplingConfig& cfg) {
    const std::string fp = fingerprint(messages, cfg);
    GatewayExchange ex;
    if (options_.mode == Mode::Live) {
        ex = call_transport(messages, cfg, fp);
    } else if (auto hit = store_.load(fp)) {
        ex = std::move(*hit);
        ex.sampling.max_output_tokens = cfg.max_output_tokens;
    } else if (options_.mode == Mode::Replay) {
        throw ReplayMissError(fp);
    } else {
        ex = call_transport(messages, cfg, fp);
        store_.save(ex);
    }
    std::lock_guard lock(ledger_mu_);
    ledger_.charge(ex);
    return ex;
}

GatewayExchange Gateway::call_transport(const std::vector<Message>& messages, const SamplingConfig& cfg,
                                        const std::string& fp) {
    for (int attempt = 1;; ++attempt) {
        try {
            in_flight_.acquire();
            struct Release {
                std::counting_semaphore<>& s;
                ~Release() { s.release(); }
            } release{in_flight_};
            ++transport_calls_;
            const auto start = std::chrono::steady_clock::now();
            TransportReply reply = transport_->send(messages, cfg);
            GatewayExchange ex;
            ex.messages = messages;
            ex.sampling = cfg;
            ex.response = std::move(reply.text);
            ex.tokens_in = reply.tokens_in;
            ex.tokens_out = reply.tokens_out;
            ex.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            ex.fingerprint = fp;
            return ex;
        } catch (const TransportError& e) {
            if (!e.retryable() || attempt >= options_.max_attempts) throw;
        }
        options_.sleep(options_.backoff_base * (1 << (attempt - 1)));
    }
}

CostLedger Gateway::ledger() const {
    std::lock_guard lock(ledger_mu_);
    return ledger_;
}

}  // namespace wfsynth::gateway
