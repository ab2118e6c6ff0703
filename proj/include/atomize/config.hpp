// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace atomize {

/// Run settings below the CLI layer. Precedence: built-in defaults, then the
/// config file, then environment variables; CLI flags override all of these.
struct Settings {
    std::string endpoint = "https://api.openai.com";
    std::string model;
    std::string cache_dir = ".atomize-bench-cache";
    int concurrency = 4;
    double temperature = 0.0;
    double top_p = 0.95;
    int max_tokens = 512;
    double timeout_s = 60.0;
    bool strict_case = false;
};

/// Minimal flat TOML subset: `key = value` lines with quoted strings,
/// integers, floats and booleans; `#` comments; `[section]` headers flatten
/// into dotted key prefixes. Enough for a run-settings file; anything fancier
/// is rejected with a parse_error.
std::map<std::string, std::string> parse_toml_flat(std::string_view text);

Settings load_settings(const std::optional<std::filesystem::path>& config_file);

}  // namespace atomize
