// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/config.hpp"

#include <doctest.h>

#include <cstdlib>

#include "atomize/errors.hpp"
#include "test_util.hpp"

using namespace atomize;

TEST_CASE("flat toml parsing") {
    const auto values = parse_toml_flat(
        "# run settings\n"
        "endpoint = \"http://localhost:8000\"\n"
        "concurrency = 8\n"
        "temperature = 0.5\n"
        "strict_case = true\n"
        "\n"
        "[gateway]\n"
        "timeout_s = 30  # seconds\n"
        "note = \"quoted # not a comment\"\n");
    CHECK(values.at("endpoint") == "http://localhost:8000");
    CHECK(values.at("concurrency") == "8");
    CHECK(values.at("temperature") == "0.5");
    CHECK(values.at("strict_case") == "true");
    CHECK(values.at("gateway.timeout_s") == "30");
    CHECK(values.at("gateway.note") == "quoted # not a comment");
}

TEST_CASE("toml string escapes") {
    const auto values = parse_toml_flat("key = \"a\\nb\\t\\\"c\\\"\"\n");
    CHECK(values.at("key") == "a\nb\t\"c\"");
}

TEST_CASE("toml rejects malformed input") {
    CHECK_THROWS_AS(parse_toml_flat("key\n"), parse_error);
    CHECK_THROWS_AS(parse_toml_flat("key = \"unterminated\n"), parse_error);
    CHECK_THROWS_AS(parse_toml_flat("key = bare_word\n"), parse_error);
    CHECK_THROWS_AS(parse_toml_flat("[section\n"), parse_error);
    CHECK_THROWS_AS(parse_toml_flat("key = \"bad \\q escape\"\n"), parse_error);
}

namespace {

struct EnvGuard {
    EnvGuard(const char* name, const char* value) : name_(name) {
        const char* old = std::getenv(name);
        if (old != nullptr) old_ = old;
        if (value != nullptr) {
            ::setenv(name, value, 1);
        } else {
            ::unsetenv(name);
        }
    }
    ~EnvGuard() {
        if (old_) {
            ::setenv(name_, old_->c_str(), 1);
        } else {
            ::unsetenv(name_);
        }
    }
    const char* name_;
    std::optional<std::string> old_;
};

}  // namespace

TEST_CASE("settings precedence: defaults, then file, then environment") {
    EnvGuard endpoint("ATOMIZE_BENCH_ENDPOINT", nullptr);
    EnvGuard cache("ATOMIZE_BENCH_CACHE", nullptr);

    const Settings defaults = load_settings(std::nullopt);
    CHECK(defaults.endpoint == "https://api.openai.com");
    CHECK(defaults.temperature == 0.0);
    CHECK(defaults.top_p == 0.95);
    CHECK(defaults.max_tokens == 512);
    CHECK(defaults.concurrency == 4);
    CHECK_FALSE(defaults.strict_case);

    testutil::TempDir dir;
    testutil::spit(dir / "config.toml",
                   "endpoint = \"http://from-file:1\"\n"
                   "cache_dir = \"/tmp/file-cache\"\n"
                   "concurrency = 9\n"
                   "strict_case = true\n");
    const Settings from_file = load_settings(dir / "config.toml");
    CHECK(from_file.endpoint == "http://from-file:1");
    CHECK(from_file.cache_dir == "/tmp/file-cache");
    CHECK(from_file.concurrency == 9);
    CHECK(from_file.strict_case);

    EnvGuard endpoint2("ATOMIZE_BENCH_ENDPOINT", "http://from-env:2");
    EnvGuard cache2("ATOMIZE_BENCH_CACHE", "/tmp/env-cache");
    const Settings with_env = load_settings(dir / "config.toml");
    CHECK(with_env.endpoint == "http://from-env:2");
    CHECK(with_env.cache_dir == "/tmp/env-cache");
    CHECK(with_env.concurrency == 9);  // file value survives
}
