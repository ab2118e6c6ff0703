// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/config.hpp"

#include <cstdlib>

#include "atomize/errors.hpp"
#include "atomize/io.hpp"

namespace atomize {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::string parse_toml_string(std::string_view value, std::size_t line_no) {
    std::string out;
    for (std::size_t i = 1; i + 1 < value.size(); ++i) {
        char c = value[i];
        if (c == '\\') {
            if (i + 1 >= value.size() - 1) {
                throw parse_error("config line " + std::to_string(line_no) +
                                  ": dangling escape");
            }
            ++i;
            switch (value[i]) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default:
                    throw parse_error("config line " + std::to_string(line_no) +
                                      ": unsupported escape");
            }
        }
        out.push_back(c);
    }
    return out;
}

bool looks_numeric_or_bool(std::string_view value) {
    if (value == "true" || value == "false") return true;
    if (value.empty()) return false;
    std::size_t i = (value[0] == '-' || value[0] == '+') ? 1 : 0;
    if (i == value.size()) return false;
    bool seen_dot = false;
    for (; i < value.size(); ++i) {
        if (value[i] == '.') {
            if (seen_dot) return false;
            seen_dot = true;
            continue;
        }
        if (value[i] < '0' || value[i] > '9') return false;
    }
    return true;
}

}  // namespace

std::map<std::string, std::string> parse_toml_flat(std::string_view text) {
    std::map<std::string, std::string> out;
    std::string prefix;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        // Strip comments outside of strings.
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw parse_error("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            prefix = std::string(trim(line.substr(1, line.size() - 2)));
            if (!prefix.empty()) prefix += '.';
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw parse_error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = prefix + std::string(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw parse_error("config line " + std::to_string(line_no) + ": empty key or value");
        }
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                throw parse_error("config line " + std::to_string(line_no) +
                                  ": unterminated string");
            }
            out[key] = parse_toml_string(value, line_no);
        } else if (looks_numeric_or_bool(value)) {
            out[key] = std::string(value);
        } else {
            throw parse_error("config line " + std::to_string(line_no) + ": unsupported value '" +
                              std::string(value) + "'");
        }
    }
    return out;
}

Settings load_settings(const std::optional<std::filesystem::path>& config_file) {
    Settings settings;

    if (config_file) {
        const auto values = parse_toml_flat(read_file(*config_file));
        const auto get = [&](const char* key) -> std::optional<std::string> {
            const auto it = values.find(key);
            if (it == values.end()) return std::nullopt;
            return it->second;
        };
        if (const auto v = get("endpoint")) settings.endpoint = *v;
        if (const auto v = get("model")) settings.model = *v;
        if (const auto v = get("cache_dir")) settings.cache_dir = *v;
        if (const auto v = get("concurrency")) settings.concurrency = std::stoi(*v);
        if (const auto v = get("temperature")) settings.temperature = std::stod(*v);
        if (const auto v = get("top_p")) settings.top_p = std::stod(*v);
        if (const auto v = get("max_tokens")) settings.max_tokens = std::stoi(*v);
        if (const auto v = get("timeout_s")) settings.timeout_s = std::stod(*v);
        if (const auto v = get("strict_case")) settings.strict_case = (*v == "true");
    }

    if (const char* endpoint = std::getenv("ATOMIZE_BENCH_ENDPOINT");
        endpoint != nullptr && *endpoint != '\0') {
        settings.endpoint = endpoint;
    }
    if (const char* cache = std::getenv("ATOMIZE_BENCH_CACHE");
        cache != nullptr && *cache != '\0') {
        settings.cache_dir = cache;
    }
    return settings;
}

}  // namespace atomize
