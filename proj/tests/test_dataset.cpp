// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/dataset.hpp"

#include <doctest.h>

#include "atomize/errors.hpp"
#include "naive_ops.hpp"
#include "test_util.hpp"

using namespace atomize;

TEST_CASE("word list loading normalizes, dedupes and keeps rank order") {
    testutil::TempDir dir;
    const auto path = dir / "words.txt";
    testutil::spit(path, "the\nof\nand\ndon't\nThe\nZebra\n1234\nof\n");

    const WordList list = load_word_list(path, 4);
    REQUIRE(list.words.size() == 4);
    CHECK(list.words[0].text() == "the");
    CHECK(list.words[1].text() == "of");
    CHECK(list.words[2].text() == "and");
    CHECK(list.words[3].text() == "zebra");
    CHECK(list.warnings.empty());
}

TEST_CASE("word list loading handles word,count CSV rows") {
    testutil::TempDir dir;
    const auto path = dir / "freq.csv";
    testutil::spit(path, "word,count\nthe,23135851162\nof,13151942776\nand,12997637966\n");

    const WordList list = load_word_list(path, 3);
    REQUIRE(list.words.size() == 3);
    CHECK(list.words[0].text() == "the");
    CHECK(list.words[2].text() == "and");
}

TEST_CASE("short word lists come back with a warning, not an error") {
    testutil::TempDir dir;
    const auto path = dir / "short.txt";
    testutil::spit(path, "alpha\nbeta\n");

    const WordList list = load_word_list(path, 10);
    CHECK(list.words.size() == 2);
    REQUIRE(list.warnings.size() == 1);
    CHECK(list.warnings[0].find("fewer") != std::string::npos);
}

TEST_CASE("missing word list raises an io error") {
    CHECK_THROWS_AS(load_word_list("/nonexistent/words.txt", 5), io_error);
}

TEST_CASE("builtin word list is valid and capped") {
    const WordList list = builtin_word_list();
    CHECK(list.words.size() == 50);
    CHECK(builtin_word_list(10).words.size() == 10);
    for (const Word& word : list.words) CHECK(is_valid_word(word.text()));
}

TEST_CASE("instance generation is seeded and satisfies the invariants") {
    const WordList list = builtin_word_list();
    for (TaskKind task : {TaskKind::Deletion, TaskKind::Insertion, TaskKind::Substitution}) {
        const auto instances = generate_instances(list, task, 7);
        REQUIRE(instances.size() == list.words.size());
        for (const TaskInstance& inst : instances) {
            CHECK(inst.task == task);
            CHECK(inst.op.kind == task);
            CHECK(testoracle::naive_occurrences(inst.word.text(), inst.op.target) >= 1);
            CHECK(inst.target_occurrences ==
                  testoracle::naive_occurrences(inst.word.text(), inst.op.target));
            if (task == TaskKind::Substitution) {
                CHECK(inst.op.replacement != inst.op.target);
            }
            std::string naive;
            switch (task) {
                case TaskKind::Deletion:
                    naive = testoracle::naive_delete(inst.word.text(), inst.op.target);
                    break;
                case TaskKind::Insertion:
                    naive = testoracle::naive_insert(inst.word.text(), inst.op.target,
                                                     *inst.op.replacement);
                    break;
                case TaskKind::Substitution:
                    naive = testoracle::naive_substitute(inst.word.text(), inst.op.target,
                                                         *inst.op.replacement);
                    break;
            }
            CHECK(inst.expected == naive);
        }

        // Byte-identical regeneration; a different seed lands elsewhere.
        const auto again = generate_instances(list, task, 7);
        REQUIRE(again.size() == instances.size());
        bool identical = true;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            identical = identical && instances[i].id == again[i].id &&
                        instances[i].op == again[i].op &&
                        instances[i].expected == again[i].expected;
        }
        CHECK(identical);

        const auto other_seed = generate_instances(list, task, 8);
        bool any_difference = false;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            if (!(instances[i].op == other_seed[i].op)) any_difference = true;
        }
        CHECK(any_difference);
    }
}

TEST_CASE("instance ids embed task, word and zero-padded rank") {
    const auto instances = generate_instances(builtin_word_list(3), TaskKind::Deletion, 1);
    REQUIRE(instances.size() == 3);
    CHECK(instances[0].id == "deletion-the-00000");
    CHECK(instances[1].id == "deletion-of-00001");
    CHECK(instances[2].id == "deletion-and-00002");
}

TEST_CASE("dataset JSONL round trip") {
    testutil::TempDir dir;
    const auto path = dir / "data.jsonl";
    const auto instances = generate_instances(builtin_word_list(), TaskKind::Insertion, 11);
    write_dataset(path, instances);

    const auto loaded = read_dataset(path);
    REQUIRE(loaded.size() == instances.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].id == instances[i].id);
        CHECK(loaded[i].word == instances[i].word);
        CHECK(loaded[i].op == instances[i].op);
        CHECK(loaded[i].expected == instances[i].expected);
    }

    // Writing again is byte-identical.
    const std::string first = testutil::slurp(path);
    write_dataset(path, instances);
    CHECK(testutil::slurp(path) == first);
}

TEST_CASE("dataset parsing rejects malformed lines") {
    testutil::TempDir dir;
    const auto path = dir / "bad.jsonl";

    testutil::spit(path, "not json\n");
    CHECK_THROWS_AS(read_dataset(path), parse_error);

    // Multi-character target.
    testutil::spit(path,
                   R"({"id":"deletion-hello-00000","task":"deletion","word":"hello","target":"ll","expected":"heo"})"
                   "\n");
    CHECK_THROWS_AS(read_dataset(path), validation_error);

    // Target absent from the word.
    testutil::spit(path,
                   R"({"id":"deletion-hello-00000","task":"deletion","word":"hello","target":"q","expected":"hello"})"
                   "\n");
    CHECK_THROWS_AS(read_dataset(path), validation_error);

    // Expected disagrees with the oracle.
    testutil::spit(path,
                   R"({"id":"deletion-hello-00000","task":"deletion","word":"hello","target":"l","expected":"helo"})"
                   "\n");
    CHECK_THROWS_AS(read_dataset(path), validation_error);

    // Substitution replacement equal to the target.
    testutil::spit(path,
                   R"({"id":"substitution-hello-00000","task":"substitution","word":"hello","target":"l","replacement":"l","expected":"hello"})"
                   "\n");
    CHECK_THROWS_AS(read_dataset(path), validation_error);
}
