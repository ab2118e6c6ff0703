// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "atomize/core_ops.hpp"

namespace atomize {

/// One benchmark item. `expected` is always the oracle output for (word, op).
struct TaskInstance {
    std::string id;
    TaskKind task;
    Word word;
    CharOp op;
    std::string expected;
    // Derived, not serialized.
    std::size_t word_length = 0;
    std::size_t target_occurrences = 0;
};

struct WordList {
    std::vector<Word> words;
    std::string source;
    std::vector<std::string> warnings;
};

/// First `limit` words surviving normalization, in file order: lowercased,
/// entries with non-letters dropped, duplicates dropped keeping the first
/// occurrence. Accepts one word per line or `word,count` CSV rows (a leading
/// `word,count` header row is skipped). A list shorter than `limit` is
/// returned with a warning recorded, not an error.
WordList load_word_list(const std::filesystem::path& path, std::size_t limit);

/// Compiled-in list of 50 common English words so tests and demo runs work
/// with no external download.
WordList builtin_word_list(std::size_t limit = 50);

/// One instance per word, fully determined by (list, task, seed). The target
/// (anchor) is drawn uniformly over character positions; a substitution
/// replacement uniformly over the 25 letters differing from the target; an
/// inserted character uniformly over all 26 letters.
std::vector<TaskInstance> generate_instances(const WordList& list, TaskKind task,
                                             std::uint64_t seed);

// JSONL dataset file: one instance per line with fields
// {id, task, word, target, replacement?, expected}. Written atomically.
void write_dataset(const std::filesystem::path& path, const std::vector<TaskInstance>& instances);
std::vector<TaskInstance> read_dataset(const std::filesystem::path& path);

/// Rebuilds the derived fields and checks the instance invariants
/// (target occurs in word, expected matches the oracle). Used on load.
TaskInstance make_instance(std::string id, TaskKind task, Word word, CharOp op);

}  // namespace atomize
