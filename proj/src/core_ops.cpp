// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/core_ops.hpp"

#include <algorithm>

#include "atomize/errors.hpp"

namespace atomize {

std::string_view task_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::Deletion: return "deletion";
        case TaskKind::Insertion: return "insertion";
        case TaskKind::Substitution: return "substitution";
    }
    return "unknown";
}

TaskKind parse_task(std::string_view name) {
    if (name == "deletion") return TaskKind::Deletion;
    if (name == "insertion") return TaskKind::Insertion;
    if (name == "substitution") return TaskKind::Substitution;
    throw config_error("unknown task: " + std::string(name));
}

bool is_valid_word(std::string_view text) {
    if (text.empty()) return false;
    return std::all_of(text.begin(), text.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

Word::Word(std::string text) : text_(std::move(text)) {
    if (!is_valid_word(text_)) {
        throw validation_error("invalid word (must be non-empty lowercase a-z): \"" + text_ + "\"");
    }
}

CharOp CharOp::deletion(char target) { return CharOp{TaskKind::Deletion, target, std::nullopt}; }

CharOp CharOp::insertion(char anchor, char newchar) {
    return CharOp{TaskKind::Insertion, anchor, newchar};
}

CharOp CharOp::substitution(char target, char replacement) {
    return CharOp{TaskKind::Substitution, target, replacement};
}

void validate_op(const CharOp& op) {
    auto is_letter = [](char c) { return c >= 'a' && c <= 'z'; };
    if (!is_letter(op.target)) {
        throw validation_error("op target must be a single lowercase letter");
    }
    if (op.kind == TaskKind::Deletion) {
        if (op.replacement.has_value()) {
            throw validation_error("deletion op carries no replacement character");
        }
        return;
    }
    if (!op.replacement.has_value() || !is_letter(*op.replacement)) {
        throw validation_error("insertion/substitution op needs a lowercase replacement character");
    }
}

std::string delete_chars(std::string_view text, char target) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != target) out.push_back(c);
    }
    return out;
}

std::string insert_after(std::string_view text, char anchor, char newchar) {
    std::string out;
    out.reserve(text.size() * 2);
    // Iterating the original text means inserted characters are never
    // themselves treated as anchors, even when anchor == newchar.
    for (char c : text) {
        out.push_back(c);
        if (c == anchor) out.push_back(newchar);
    }
    return out;
}

std::string substitute(std::string_view text, char target, char replacement) {
    std::string out(text);
    for (char& c : out) {
        if (c == target) c = replacement;
    }
    return out;
}

std::string apply_op(std::string_view text, const CharOp& op) {
    validate_op(op);
    switch (op.kind) {
        case TaskKind::Deletion: return delete_chars(text, op.target);
        case TaskKind::Insertion: return insert_after(text, op.target, *op.replacement);
        case TaskKind::Substitution: return substitute(text, op.target, *op.replacement);
    }
    throw config_error("unreachable op kind");
}

std::string apply_op_first_occurrence_only(std::string_view text, const CharOp& op) {
    validate_op(op);
    std::string out(text);
    const std::size_t pos = out.find(op.target);
    if (pos == std::string::npos) return out;
    switch (op.kind) {
        case TaskKind::Deletion:
            out.erase(pos, 1);
            break;
        case TaskKind::Insertion:
            out.insert(pos + 1, 1, *op.replacement);
            break;
        case TaskKind::Substitution:
            out[pos] = *op.replacement;
            break;
    }
    return out;
}

std::string delete_chars(const Word& word, char target) { return delete_chars(word.text(), target); }

std::string insert_after(const Word& word, char anchor, char newchar) {
    return insert_after(word.text(), anchor, newchar);
}

std::string substitute(const Word& word, char target, char replacement) {
    return substitute(word.text(), target, replacement);
}

std::string apply_op(const Word& word, const CharOp& op) { return apply_op(word.text(), op); }

std::string apply_op_first_occurrence_only(const Word& word, const CharOp& op) {
    return apply_op_first_occurrence_only(word.text(), op);
}

std::vector<char> spell(const Word& word) {
    return std::vector<char>(word.text().begin(), word.text().end());
}

bool char_in_word(const Word& word, char c) {
    return word.text().find(c) != std::string::npos;
}

std::size_t count_distinct_chars(const Word& word) {
    bool seen[26] = {};
    for (char c : word.text()) seen[c - 'a'] = true;
    return static_cast<std::size_t>(std::count(std::begin(seen), std::end(seen), true));
}

std::size_t count_occurrences(std::string_view text, char c) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), c));
}

}  // namespace atomize
