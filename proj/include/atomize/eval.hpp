// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "atomize/dataset.hpp"

namespace atomize {

enum class ErrorClass { Correct, TypeI_AutoCorrection, TypeII_MultiTarget, Other };

std::string_view error_class_name(ErrorClass c);
ErrorClass parse_error_class(std::string_view name);

struct EvalRecord {
    std::string id;
    std::string prediction;
    std::string expected;
    bool em = false;
    ErrorClass error_class = ErrorClass::Other;
};

/// Exact match: byte equality after lowercasing both sides. `strict_case`
/// disables the folding.
bool exact_match(std::string_view prediction, std::string_view expected,
                 bool strict_case = false);

/// Classification ladder, in fixed order: Correct; then Multi-Target (the
/// target occurs at least twice and the prediction equals the
/// first-occurrence-only result); then Auto-Correction (the prediction is the
/// unmodified input, or is a dictionary word while the expected output is
/// not); otherwise Other. A prediction matching both failure patterns is
/// Multi-Target.
ErrorClass classify_error(const TaskInstance& instance, std::string_view prediction,
                          const std::unordered_set<std::string>* dictionary = nullptr,
                          bool strict_case = false);

inline constexpr std::array<std::string_view, 8> kLengthBucketLabels = {"<=3", "4", "5",  "6",
                                                                        "7",   "8", "9", ">=10"};
std::size_t length_bucket_index(std::size_t word_length);

struct CountStat {
    std::size_t correct = 0;
    std::size_t n = 0;
    double value() const { return n == 0 ? 0.0 : static_cast<double>(correct) / n; }
};

struct EvalReport {
    CountStat overall;
    std::map<std::string, CountStat> per_task;          // task name -> stat
    std::array<CountStat, 8> per_length;                // kLengthBucketLabels order
    std::map<std::string, std::size_t> error_histogram; // error class name -> count

    // Run metadata; excluded from determinism comparisons.
    std::string strategy;
    std::string target;
    std::string dataset;
    std::string timestamp;
    bool strict_case = false;
};

/// Scores predictions against their instances. Predictions that do not join
/// to an instance raise a join_error listing the offending ids; records come
/// back sorted by instance id.
std::vector<EvalRecord> score_predictions(
    const std::vector<TaskInstance>& instances,
    const std::vector<std::pair<std::string, std::string>>& predictions_by_id,
    const std::unordered_set<std::string>* dictionary = nullptr, bool strict_case = false);

/// Accuracy = correct / N as exact integer counts; per-task and per-length
/// breakdowns; error-class histogram. Records must all join to instances.
EvalReport aggregate(const std::vector<EvalRecord>& records,
                     const std::vector<TaskInstance>& instances);

/// The run's own word list as the Type I dictionary.
std::unordered_set<std::string> dictionary_from_instances(
    const std::vector<TaskInstance>& instances);

}  // namespace atomize
