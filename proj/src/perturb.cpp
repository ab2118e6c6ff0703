// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/perturb.hpp"

#include "atomize/errors.hpp"
#include "atomize/rng.hpp"

namespace atomize {

std::size_t separator_count(std::size_t length, int degree_percent) {
    if (length < 1) throw validation_error("separator_count: length must be >= 1");
    if (degree_percent < 0 || degree_percent > 100) {
        throw validation_error("separator_count: degree must be in [0, 100]");
    }
    return (length - 1) * static_cast<std::size_t>(degree_percent) / 100;
}

std::string perturb_word(const Word& word, const PerturbSpec& spec) {
    const std::string& text = word.text();
    const std::size_t separators = separator_count(text.size(), spec.degree_percent);
    if (separators == 0) return text;

    Rng rng(spec.seed);
    // Gap i sits between text[i] and text[i+1].
    const std::vector<std::size_t> gaps =
        sample_without_replacement(rng, text.size() - 1, separators);

    std::string out;
    out.reserve(text.size() + separators);
    std::size_t next_gap = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        out.push_back(text[i]);
        if (next_gap < gaps.size() && gaps[next_gap] == i) {
            out.push_back(' ');
            ++next_gap;
        }
    }
    return out;
}

std::string atomize(std::string_view text) {
    std::string out;
    if (text.empty()) return out;
    out.reserve(text.size() * 2 - 1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out.push_back(text[i]);
    }
    return out;
}

std::string atomize(const Word& word) { return atomize(std::string_view(word.text())); }

std::string deatomize(std::string_view spaced) {
    if (spaced.empty()) throw parse_error("deatomize: empty input");
    if (spaced.front() == ' ' || spaced.back() == ' ') {
        throw parse_error("deatomize: leading or trailing space");
    }
    std::string out;
    out.reserve(spaced.size());
    bool prev_space = false;
    for (char c : spaced) {
        if (c == ' ') {
            if (prev_space) throw parse_error("deatomize: adjacent spaces");
            prev_space = true;
            continue;
        }
        if (c < 'a' || c > 'z') {
            throw parse_error(std::string("deatomize: unexpected character '") + c + "'");
        }
        prev_space = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace atomize
