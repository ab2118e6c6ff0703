// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// One completion interface over live OpenAI-compatible endpoints and the
// deterministic offline mocks, with a persistent content-addressed response
// cache, retry with backoff, and a run-level in-flight bound.

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atomize/rng.hpp"

namespace atomize {

struct LiveConfig {
    std::string endpoint = "https://api.openai.com";
    std::string model;
    double temperature = 0.0;
    double top_p = 0.95;
    int max_tokens = 512;
    double timeout_s = 60.0;
};

struct MockConfig {
    std::string behavior = "oracle";
    double probability = 1.0;      // autocorrect / first_only trigger rate
    std::size_t length_limit = 6;  // length_fail threshold
    std::uint64_t seed = 0;
};

struct ModelTarget {
    enum class Kind { Live, Mock };
    Kind kind = Kind::Mock;
    LiveConfig live;
    MockConfig mock;

    static ModelTarget make_live(LiveConfig config);
    /// Accepts "oracle", "autocorrect[:p]", "first_only[:p]",
    /// "length_fail[:N]", "garbage". Throws config_error on unknown names.
    static ModelTarget make_mock(std::string_view spec, std::uint64_t seed = 0);

    /// Stable identity string; part of the cache key and transcript snapshot.
    std::string id() const;
};

struct MockBehaviorInfo {
    std::string name;
    std::string summary;
};

/// Catalog of the deterministic mock behaviors make_mock accepts.
const std::vector<MockBehaviorInfo>& mock_behaviors();

/// Pure mock response for a rendered prompt. Exposed for direct testing.
std::string mock_reply(const MockConfig& config, const std::string& user_message);

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::int64_t total_tokens = 0;
};

/// Full record of one request/response, cache metadata included.
struct Exchange {
    std::optional<std::string> system;
    std::string user;
    std::string target_id;
    std::string cache_key;

    std::string raw_text;
    double latency_ms = 0.0;
    std::optional<TokenUsage> usage;
    bool cache_hit = false;
    bool ok = true;
    std::string error;  // transport/protocol description when !ok
};

struct RetryPolicy {
    int max_attempts = 5;
    double base_delay_ms = 1000.0;
    double max_delay_ms = 30000.0;
};

/// 429, 5xx and transport failures retry; other statuses do not.
bool retryable_status(int status);

/// Exponential backoff with full jitter: uniform in [0, min(max, base * 2^(attempt-1))).
double backoff_with_jitter_ms(const RetryPolicy& policy, int attempt, Rng& rng);

struct GatewayStats {
    std::uint64_t live_calls = 0;
    std::uint64_t mock_calls = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t retries = 0;
    std::uint64_t errors = 0;
    int max_in_flight = 0;
};

class Gateway {
public:
    struct Options {
        std::filesystem::path cache_dir;  // empty disables the cache
        int concurrency = 4;
        RetryPolicy retry;
        std::string api_key_env = "ATOMIZE_BENCH_API_KEY";
        std::function<void()> in_flight_hook;        // test hook, runs while in flight
        std::function<void(double)> sleep_ms;        // injectable for tests
    };

    explicit Gateway(Options options);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Cache -> mock/live completion. Never throws for per-request transport
    /// problems; those come back as Exchange{ok = false}.
    Exchange complete(const ModelTarget& target, const std::optional<std::string>& system,
                      const std::string& user);

    GatewayStats stats() const;

    /// Content hash over (target identity, model, temperature, top_p,
    /// max_tokens, system, user). Exposed for tests.
    static std::string cache_key(const ModelTarget& target,
                                 const std::optional<std::string>& system,
                                 const std::string& user);

    static std::filesystem::path cache_path(const std::filesystem::path& cache_dir,
                                            std::string_view key);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace atomize
