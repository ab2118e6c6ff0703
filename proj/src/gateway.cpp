// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/gateway.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "atomize/errors.hpp"
#include "atomize/io.hpp"
#include "atomize/sha256.hpp"

namespace atomize {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct ParsedUrl {
    std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
    std::string base_path;         // path component, possibly empty
};

ParsedUrl split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw config_error("endpoint needs a scheme: " + url);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string path = url.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {url.substr(0, path_start), path};
}

std::string completions_path(const std::string& base_path) {
    if (base_path.ends_with("/chat/completions")) return base_path;
    if (base_path.ends_with("/v1")) return base_path + "/chat/completions";
    return base_path + "/v1/chat/completions";
}

}  // namespace

ModelTarget ModelTarget::make_live(LiveConfig config) {
    if (config.model.empty()) throw config_error("live target needs a model name");
    if (config.temperature < 0) throw config_error("temperature must be >= 0");
    if (config.top_p <= 0 || config.top_p > 1) throw config_error("top_p must be in (0, 1]");
    if (config.max_tokens < 1) throw config_error("max_tokens must be positive");
    ModelTarget target;
    target.kind = Kind::Live;
    target.live = std::move(config);
    return target;
}

ModelTarget ModelTarget::make_mock(std::string_view spec, std::uint64_t seed) {
    ModelTarget target;
    target.kind = Kind::Mock;
    target.mock.seed = seed;

    std::string name(spec);
    std::string param;
    if (const std::size_t colon = name.find(':'); colon != std::string::npos) {
        param = name.substr(colon + 1);
        name = name.substr(0, colon);
    }
    target.mock.behavior = name;
    if (name == "oracle" || name == "garbage") {
        if (!param.empty()) throw config_error("mock behavior " + name + " takes no parameter");
        return target;
    }
    if (name == "autocorrect" || name == "first_only") {
        if (!param.empty()) {
            char* end = nullptr;
            const double p = std::strtod(param.c_str(), &end);
            if (end == nullptr || *end != '\0' || p < 0.0 || p > 1.0) {
                throw config_error("mock probability must be in [0, 1]: " + param);
            }
            target.mock.probability = p;
        }
        return target;
    }
    if (name == "length_fail") {
        if (!param.empty()) {
            char* end = nullptr;
            const long v = std::strtol(param.c_str(), &end, 10);
            if (end == nullptr || *end != '\0' || v < 1) {
                throw config_error("length_fail threshold must be a positive integer: " + param);
            }
            target.mock.length_limit = static_cast<std::size_t>(v);
        }
        return target;
    }
    throw config_error("unknown mock behavior: " + name);
}

std::string ModelTarget::id() const {
    if (kind == Kind::Live) return "live:" + live.model + "@" + live.endpoint;
    std::string id = "mock:" + mock.behavior;
    if (mock.behavior == "autocorrect" || mock.behavior == "first_only") {
        id += "(p=" + format_double(mock.probability) + ",seed=" + std::to_string(mock.seed) + ")";
    } else if (mock.behavior == "length_fail") {
        id += "(limit=" + std::to_string(mock.length_limit) + ")";
    }
    return id;
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status <= 599);
}

double backoff_with_jitter_ms(const RetryPolicy& policy, int attempt, Rng& rng) {
    double ceiling = policy.base_delay_ms;
    for (int i = 1; i < attempt; ++i) ceiling *= 2.0;
    if (ceiling > policy.max_delay_ms) ceiling = policy.max_delay_ms;
    const double unit =
        static_cast<double>(rng()) / static_cast<double>(std::numeric_limits<std::uint64_t>::max());
    return ceiling * unit;
}

struct Gateway::Impl {
    Options options;
    std::counting_semaphore<1024> semaphore;
    std::atomic<int> in_flight{0};
    std::atomic<int> max_in_flight{0};
    std::atomic<std::uint64_t> live_calls{0};
    std::atomic<std::uint64_t> mock_calls{0};
    std::atomic<std::uint64_t> cache_hits{0};
    std::atomic<std::uint64_t> cache_misses{0};
    std::atomic<std::uint64_t> retries{0};
    std::atomic<std::uint64_t> errors{0};
    std::mutex backoff_mutex;
    Rng backoff_rng{0x9e3779b97f4a7c15ull};

    explicit Impl(Options opts)
        : options(std::move(opts)),
          semaphore(options.concurrency > 0 ? options.concurrency : 1) {
        if (options.concurrency < 1) throw config_error("concurrency must be >= 1");
        if (!options.sleep_ms) {
            options.sleep_ms = [](double ms) {
                std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
            };
        }
    }

    void sleep_backoff(int attempt) {
        double delay = 0;
        {
            std::lock_guard lock(backoff_mutex);
            delay = backoff_with_jitter_ms(options.retry, attempt, backoff_rng);
        }
        options.sleep_ms(delay);
    }

    void perform_live(const ModelTarget& target, Exchange& exchange) {
        const char* key = std::getenv(options.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            exchange.ok = false;
            exchange.error = "missing credential: set " + options.api_key_env;
            return;
        }

        ParsedUrl url;
        try {
            url = split_url(target.live.endpoint);
        } catch (const config_error& e) {
            exchange.ok = false;
            exchange.error = e.what();
            return;
        }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (url.scheme_host_port.starts_with("https://")) {
            exchange.ok = false;
            exchange.error = "https endpoints need a build with OpenSSL support";
            return;
        }
#endif

        json body = {
            {"model", target.live.model},
            {"messages", json::array()},
            {"temperature", target.live.temperature},
            {"top_p", target.live.top_p},
            {"max_tokens", target.live.max_tokens},
        };
        if (exchange.system) {
            body["messages"].push_back({{"role", "system"}, {"content", *exchange.system}});
        }
        body["messages"].push_back({{"role", "user"}, {"content", exchange.user}});
        const std::string payload = body.dump();
        const std::string path = completions_path(url.base_path);

        httplib::Client client(url.scheme_host_port);
        client.set_connection_timeout(std::chrono::duration<double>(target.live.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(target.live.timeout_s));
        client.set_write_timeout(std::chrono::duration<double>(target.live.timeout_s));
        client.set_bearer_token_auth(key);

        for (int attempt = 1; attempt <= options.retry.max_attempts; ++attempt) {
            httplib::Result result = client.Post(path, payload, "application/json");
            if (!result) {
                exchange.ok = false;
                exchange.error = "transport error: " + httplib::to_string(result.error());
                if (attempt == options.retry.max_attempts) return;
                retries.fetch_add(1, std::memory_order_relaxed);
                sleep_backoff(attempt);
                continue;
            }
            if (retryable_status(result->status)) {
                exchange.ok = false;
                exchange.error = "http status " + std::to_string(result->status);
                if (attempt == options.retry.max_attempts) return;
                retries.fetch_add(1, std::memory_order_relaxed);
                // A server-provided Retry-After wins over our own backoff.
                const std::string after = result->get_header_value("Retry-After");
                if (!after.empty()) {
                    char* end = nullptr;
                    const double seconds = std::strtod(after.c_str(), &end);
                    if (end != nullptr && *end == '\0' && seconds >= 0) {
                        options.sleep_ms(seconds * 1000.0);
                        continue;
                    }
                }
                sleep_backoff(attempt);
                continue;
            }
            if (result->status != 200) {
                exchange.ok = false;
                exchange.error =
                    "http status " + std::to_string(result->status) + ": " + result->body;
                return;
            }
            try {
                const json parsed = json::parse(result->body);
                exchange.raw_text =
                    parsed.at("choices").at(0).at("message").at("content").get<std::string>();
                if (parsed.contains("usage")) {
                    TokenUsage usage;
                    const json& u = parsed["usage"];
                    usage.prompt_tokens = u.value("prompt_tokens", 0);
                    usage.completion_tokens = u.value("completion_tokens", 0);
                    usage.total_tokens = u.value("total_tokens", 0);
                    exchange.usage = usage;
                }
                exchange.ok = true;
                exchange.error.clear();
            } catch (const json::exception& e) {
                exchange.ok = false;
                exchange.error = std::string("protocol error: ") + e.what();
            }
            return;
        }
    }
};

Gateway::Gateway(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Gateway::~Gateway() = default;

std::string Gateway::cache_key(const ModelTarget& target,
                               const std::optional<std::string>& system,
                               const std::string& user) {
    json material = {
        {"target", target.kind == ModelTarget::Kind::Live ? target.live.endpoint : target.id()},
        {"model", target.kind == ModelTarget::Kind::Live ? target.live.model : std::string{}},
        {"temperature", target.kind == ModelTarget::Kind::Live ? target.live.temperature : 0.0},
        {"top_p", target.kind == ModelTarget::Kind::Live ? target.live.top_p : 0.0},
        {"max_tokens", target.kind == ModelTarget::Kind::Live ? target.live.max_tokens : 0},
        {"system", system ? json(*system) : json(nullptr)},
        {"user", user},
    };
    return sha256_hex(material.dump());
}

std::filesystem::path Gateway::cache_path(const std::filesystem::path& cache_dir,
                                          std::string_view key) {
    return cache_dir / std::string(key.substr(0, 2)) / (std::string(key) + ".json");
}

Exchange Gateway::complete(const ModelTarget& target, const std::optional<std::string>& system,
                           const std::string& user) {
    Exchange exchange;
    exchange.system = system;
    exchange.user = user;
    exchange.target_id = target.id();
    exchange.cache_key = cache_key(target, system, user);

    const bool caching = !impl_->options.cache_dir.empty();
    if (caching) {
        const auto path = cache_path(impl_->options.cache_dir, exchange.cache_key);
        if (std::filesystem::exists(path)) {
            try {
                const json entry = json::parse(read_file(path));
                exchange.raw_text = entry.at("raw").get<std::string>();
                exchange.latency_ms = entry.value("latency_ms", 0.0);
                if (entry.contains("usage") && !entry["usage"].is_null()) {
                    TokenUsage usage;
                    usage.prompt_tokens = entry["usage"].value("prompt_tokens", 0);
                    usage.completion_tokens = entry["usage"].value("completion_tokens", 0);
                    usage.total_tokens = entry["usage"].value("total_tokens", 0);
                    exchange.usage = usage;
                }
                exchange.cache_hit = true;
                impl_->cache_hits.fetch_add(1, std::memory_order_relaxed);
                return exchange;
            } catch (const std::exception&) {
                // Unreadable entry: fall through and recompute.
            }
        }
        impl_->cache_misses.fetch_add(1, std::memory_order_relaxed);
    }

    impl_->semaphore.acquire();
    const int now_in_flight = impl_->in_flight.fetch_add(1, std::memory_order_relaxed) + 1;
    int seen = impl_->max_in_flight.load(std::memory_order_relaxed);
    while (seen < now_in_flight &&
           !impl_->max_in_flight.compare_exchange_weak(seen, now_in_flight)) {
    }
    if (impl_->options.in_flight_hook) impl_->options.in_flight_hook();

    const auto start = std::chrono::steady_clock::now();
    if (target.kind == ModelTarget::Kind::Mock) {
        impl_->mock_calls.fetch_add(1, std::memory_order_relaxed);
        try {
            exchange.raw_text = mock_reply(target.mock, user);
        } catch (const std::exception& e) {
            exchange.ok = false;
            exchange.error = std::string("mock error: ") + e.what();
        }
    } else {
        impl_->live_calls.fetch_add(1, std::memory_order_relaxed);
        impl_->perform_live(target, exchange);
    }
    exchange.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    impl_->in_flight.fetch_sub(1, std::memory_order_relaxed);
    impl_->semaphore.release();

    if (!exchange.ok) {
        impl_->errors.fetch_add(1, std::memory_order_relaxed);
    } else if (caching) {
        const json entry = {
            {"key", exchange.cache_key},
            {"target", exchange.target_id},
            {"raw", exchange.raw_text},
            {"latency_ms", exchange.latency_ms},
            {"usage", exchange.usage ? json{{"prompt_tokens", exchange.usage->prompt_tokens},
                                            {"completion_tokens", exchange.usage->completion_tokens},
                                            {"total_tokens", exchange.usage->total_tokens}}
                                     : json(nullptr)},
        };
        write_file_atomic(cache_path(impl_->options.cache_dir, exchange.cache_key),
                          entry.dump() + "\n");
    }
    return exchange;
}

GatewayStats Gateway::stats() const {
    GatewayStats stats;
    stats.live_calls = impl_->live_calls.load();
    stats.mock_calls = impl_->mock_calls.load();
    stats.cache_hits = impl_->cache_hits.load();
    stats.cache_misses = impl_->cache_misses.load();
    stats.retries = impl_->retries.load();
    stats.errors = impl_->errors.load();
    stats.max_in_flight = impl_->max_in_flight.load();
    return stats;
}

}  // namespace atomize
