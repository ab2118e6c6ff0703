// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth character operations. These double as the dataset labeler and
// the verification oracle, so they are kept pure and total: a target that does
// not occur in the word is a no-op, never an error.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atomize {

enum class TaskKind { Deletion, Insertion, Substitution };

std::string_view task_name(TaskKind kind);
TaskKind parse_task(std::string_view name);  // throws config_error on unknown names

/// A validated benchmark word: non-empty, lowercase ASCII letters only.
/// Validation happens here, at construction; the operations below can then
/// assume well-formed input.
class Word {
public:
    explicit Word(std::string text);

    const std::string& text() const { return text_; }
    std::size_t length() const { return text_.size(); }

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::string text_;
};

/// True iff `text` would be accepted by the Word constructor.
bool is_valid_word(std::string_view text);

/// One character-level manipulation. `target` is the character operated on
/// (the anchor, for insertion); `replacement` is the inserted/substituted
/// character and must be absent for deletion.
struct CharOp {
    TaskKind kind;
    char target;
    std::optional<char> replacement;

    static CharOp deletion(char target);
    static CharOp insertion(char anchor, char newchar);
    static CharOp substitution(char target, char replacement);

    friend bool operator==(const CharOp&, const CharOp&) = default;
};

/// Throws validation_error if the op's shape or characters are malformed.
void validate_op(const CharOp& op);

// Character-sequence transforms. The string_view overloads are total over any
// byte sequence (the mock models run them on raw model output); the Word
// overloads are the validated oracle surface.
std::string delete_chars(std::string_view text, char target);
std::string insert_after(std::string_view text, char anchor, char newchar);
std::string substitute(std::string_view text, char target, char replacement);
std::string apply_op(std::string_view text, const CharOp& op);
std::string apply_op_first_occurrence_only(std::string_view text, const CharOp& op);

std::string delete_chars(const Word& word, char target);
std::string insert_after(const Word& word, char anchor, char newchar);
std::string substitute(const Word& word, char target, char replacement);
std::string apply_op(const Word& word, const CharOp& op);

/// The operation applied only at the leftmost occurrence of the target; equals
/// apply_op when the target occurs zero or one times. Models the incomplete
/// multi-target behavior the error classifier looks for.
std::string apply_op_first_occurrence_only(const Word& word, const CharOp& op);

std::vector<char> spell(const Word& word);
bool char_in_word(const Word& word, char c);
std::size_t count_distinct_chars(const Word& word);
std::size_t count_occurrences(std::string_view text, char c);

}  // namespace atomize
