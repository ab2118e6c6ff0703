// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/eval.hpp"

#include <doctest.h>

#include "atomize/errors.hpp"

using namespace atomize;

namespace {

TaskInstance instance_of(const std::string& word, const CharOp& op) {
    return make_instance(std::string(task_name(op.kind)) + "-" + word, op.kind, Word(word), op);
}

}  // namespace

TEST_CASE("exact match folds case unless told otherwise") {
    CHECK(exact_match("heo", "heo"));
    CHECK(exact_match("Heo", "heo"));
    CHECK_FALSE(exact_match("helo", "heo"));
    CHECK_FALSE(exact_match("Heo", "heo", /*strict_case=*/true));
    CHECK(exact_match("", ""));
}

TEST_CASE("error classification ladder") {
    // Multi-target: only the first occurrence was handled.
    CHECK(classify_error(instance_of("data", CharOp::substitution('a', 'x')), "dxta") ==
          ErrorClass::TypeII_MultiTarget);
    CHECK(classify_error(instance_of("which", CharOp::insertion('h', 'x')), "whxich") ==
          ErrorClass::TypeII_MultiTarget);

    // Auto-correction: the model returned the unmodified input.
    CHECK(classify_error(instance_of("movies", CharOp::insertion('s', 'q')), "movies") ==
          ErrorClass::TypeI_AutoCorrection);
    CHECK(classify_error(instance_of("include", CharOp::deletion('n')), "include") ==
          ErrorClass::TypeI_AutoCorrection);
    CHECK(classify_error(instance_of("chat", CharOp::substitution('t', 'c')), "chat") ==
          ErrorClass::TypeI_AutoCorrection);

    // Correct and unclassifiable predictions.
    CHECK(classify_error(instance_of("hello", CharOp::deletion('l')), "heo") ==
          ErrorClass::Correct);
    CHECK(classify_error(instance_of("hello", CharOp::deletion('l')), "hllo") ==
          ErrorClass::Other);
}

TEST_CASE("a prediction matching both failure patterns counts as multi-target") {
    const std::unordered_set<std::string> dictionary = {"aa", "a"};
    const TaskInstance inst = instance_of("aa", CharOp::deletion('a'));
    // "a" equals the first-occurrence-only result AND is a dictionary word.
    CHECK(classify_error(inst, "a", &dictionary) == ErrorClass::TypeII_MultiTarget);
}

TEST_CASE("dictionary membership signals auto-correction") {
    const std::unordered_set<std::string> dictionary = {"chat", "which", "the"};
    const TaskInstance inst = instance_of("chat", CharOp::substitution('t', 'c'));
    // Prediction is a real word while the expected output is not.
    CHECK(classify_error(inst, "which", &dictionary) == ErrorClass::TypeI_AutoCorrection);
    CHECK(classify_error(inst, "wxyz", &dictionary) == ErrorClass::Other);
    // Case-folded dictionary lookup.
    CHECK(classify_error(inst, "Which", &dictionary) == ErrorClass::TypeI_AutoCorrection);
}

TEST_CASE("length buckets") {
    CHECK(length_bucket_index(1) == 0);
    CHECK(length_bucket_index(3) == 0);
    CHECK(length_bucket_index(4) == 1);
    CHECK(length_bucket_index(6) == 3);
    CHECK(length_bucket_index(9) == 6);
    CHECK(length_bucket_index(10) == 7);
    CHECK(length_bucket_index(25) == 7);
    CHECK(kLengthBucketLabels[0] == "<=3");
    CHECK(kLengthBucketLabels[7] == ">=10");
}

TEST_CASE("scoring and aggregation") {
    std::vector<TaskInstance> instances = {
        instance_of("hello", CharOp::deletion('l')),        // len 5
        instance_of("data", CharOp::substitution('a', 'x')),  // len 4
        instance_of("information", CharOp::deletion('f')),  // len 11
    };
    const std::vector<std::pair<std::string, std::string>> predictions = {
        {instances[0].id, "heo"},    // correct
        {instances[1].id, "dxta"},   // first-occurrence-only
        {instances[2].id, "information"},  // unmodified input
    };
    const auto records = score_predictions(instances, predictions);
    REQUIRE(records.size() == 3);

    const EvalReport report = aggregate(records, instances);
    CHECK(report.overall.n == 3);
    CHECK(report.overall.correct == 1);
    CHECK(report.overall.value() == doctest::Approx(1.0 / 3.0));
    CHECK(report.per_task.at("deletion").n == 2);
    CHECK(report.per_task.at("deletion").correct == 1);
    CHECK(report.per_task.at("substitution").correct == 0);
    CHECK(report.per_length[length_bucket_index(5)].correct == 1);
    CHECK(report.per_length[length_bucket_index(4)].n == 1);
    CHECK(report.per_length[length_bucket_index(11)].n == 1);
    CHECK(report.error_histogram.at("Correct") == 1);
    CHECK(report.error_histogram.at("TypeII_MultiTarget") == 1);
    CHECK(report.error_histogram.at("TypeI_AutoCorrection") == 1);
    CHECK(report.error_histogram.at("Other") == 0);
}

TEST_CASE("orphan record ids raise a join error listing the offenders") {
    std::vector<TaskInstance> instances = {instance_of("hello", CharOp::deletion('l'))};
    const std::vector<std::pair<std::string, std::string>> predictions = {
        {instances[0].id, "heo"},
        {"deletion-ghost-99999", "boo"},
    };
    CHECK_THROWS_WITH_AS(score_predictions(instances, predictions),
                         doctest::Contains("deletion-ghost-99999"), join_error);
}

TEST_CASE("error class names round-trip") {
    for (ErrorClass c : {ErrorClass::Correct, ErrorClass::TypeI_AutoCorrection,
                         ErrorClass::TypeII_MultiTarget, ErrorClass::Other}) {
        CHECK(parse_error_class(error_class_name(c)) == c);
    }
    CHECK_THROWS_AS(parse_error_class("TypeIII"), parse_error);
}
