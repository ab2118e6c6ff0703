// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

/// Self-deleting scratch directory under the system temp root.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("atomize-test-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

/// Minimal XML well-formedness check: tags balance, attributes are quoted,
/// no stray '&' or '<'. Enough to catch malformed SVG emission.
inline bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    // Optional XML declaration.
    if (text.starts_with("<?xml")) {
        const std::size_t end = text.find("?>");
        if (end == std::string::npos) return false;
        i = end + 2;
    }
    while (i < text.size()) {
        const char c = text[i];
        if (c == '&') {
            const std::size_t semi = text.find(';', i);
            if (semi == std::string::npos || semi - i > 6) return false;
            i = semi + 1;
            continue;
        }
        if (c != '<') {
            ++i;
            continue;
        }
        const std::size_t close = text.find('>', i);
        if (close == std::string::npos) return false;
        std::string tag = text.substr(i + 1, close - i - 1);
        i = close + 1;
        if (tag.empty()) return false;
        if (tag.front() == '/') {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        if (self_closing) tag.pop_back();
        // Unquoted '=' values are rejected.
        for (std::size_t p = 0; p < tag.size(); ++p) {
            if (tag[p] == '=' && (p + 1 >= tag.size() || tag[p + 1] != '"')) return false;
        }
        std::string name;
        for (char t : tag) {
            if (std::isspace(static_cast<unsigned char>(t))) break;
            name.push_back(t);
        }
        if (name.empty()) return false;
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty();
}

}  // namespace testutil
