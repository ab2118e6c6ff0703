// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/core_ops.hpp"

#include <doctest.h>

#include <string>
#include <vector>

#include "atomize/errors.hpp"
#include "atomize/rng.hpp"
#include "naive_ops.hpp"

using namespace atomize;

TEST_CASE("deletion removes every occurrence, preserving order") {
    CHECK(delete_chars(Word("hello"), 'l') == "heo");
    CHECK(delete_chars(Word("alphabet"), 'a') == "lphbet");
    CHECK(delete_chars(Word("zebra"), 'z') == "ebra");
    CHECK(delete_chars(Word("tongue"), 'u') == "tonge");
    // Absent target is a no-op, not an error.
    CHECK(delete_chars(Word("hello"), 'q') == "hello");
}

TEST_CASE("insertion adds after every original anchor") {
    CHECK(insert_after(Word("hello"), 'e', 'a') == "heallo");
    CHECK(insert_after(Word("alphabet"), 'a', 'e') == "aelphaebet");
    CHECK(insert_after(Word("zebra"), 'z', 't') == "ztebra");
    CHECK(insert_after(Word("tongue"), 'u', 'f') == "tongufe");
    // anchor == newchar must not cascade onto the inserted characters.
    CHECK(insert_after(Word("hello"), 'l', 'l') == "hellllo");
    CHECK(insert_after(Word("hello"), 'q', 'x') == "hello");
}

TEST_CASE("substitution replaces globally") {
    CHECK(substitute(Word("hello"), 'l', 'j') == "hejjo");
    CHECK(substitute(Word("data"), 'a', 'x') == "dxtx");
    CHECK(substitute(Word("tongue"), 'u', 'e') == "tongee");
    CHECK(substitute(Word("alphabet"), 'a', 'b') == "blphbbet");
    CHECK(substitute(Word("hello"), 'h', 'e') == "eello");
    CHECK(substitute(Word("zebra"), 'z', 'a') == "aebra");
    CHECK(substitute(Word("hello"), 'l', 'l') == "hello");
}

TEST_CASE("apply_op dispatches to the matching operation") {
    const Word hello("hello");
    CHECK(apply_op(hello, CharOp::deletion('l')) == "heo");
    CHECK(apply_op(hello, CharOp::insertion('e', 'a')) == "heallo");
    CHECK(apply_op(hello, CharOp::substitution('l', 'j')) == "hejjo");
}

TEST_CASE("first-occurrence-only stops after the leftmost target") {
    CHECK(apply_op_first_occurrence_only(Word("data"), CharOp::substitution('a', 'x')) == "dxta");
    CHECK(apply_op_first_occurrence_only(Word("hello"), CharOp::deletion('l')) == "helo");
    CHECK(apply_op_first_occurrence_only(Word("zebra"), CharOp::deletion('z')) == "ebra");
    CHECK(apply_op_first_occurrence_only(Word("which"), CharOp::insertion('h', 'x')) == "whxich");
    CHECK(apply_op_first_occurrence_only(Word("hello"), CharOp::deletion('q')) == "hello");
}

TEST_CASE("word validation") {
    CHECK_THROWS_AS(Word(""), validation_error);
    CHECK_THROWS_AS(Word("Hello"), validation_error);
    CHECK_THROWS_AS(Word("don't"), validation_error);
    CHECK_THROWS_AS(Word("two words"), validation_error);
    CHECK(is_valid_word("hello"));
    CHECK_FALSE(is_valid_word("hell0"));
}

TEST_CASE("op validation") {
    CHECK_THROWS_AS(validate_op(CharOp{TaskKind::Deletion, 'a', 'b'}), validation_error);
    CHECK_THROWS_AS(validate_op(CharOp{TaskKind::Insertion, 'a', std::nullopt}),
                    validation_error);
    CHECK_THROWS_AS(validate_op(CharOp{TaskKind::Substitution, '1', 'b'}), validation_error);
    CHECK_NOTHROW(validate_op(CharOp::substitution('l', 'l')));
}

TEST_CASE("spelling, membership and distinct counts") {
    CHECK(spell(Word("hello")) == std::vector<char>{'h', 'e', 'l', 'l', 'o'});
    CHECK(spell(Word("a")) == std::vector<char>{'a'});
    CHECK(spell(Word("zebra")) == std::vector<char>{'z', 'e', 'b', 'r', 'a'});

    CHECK_FALSE(char_in_word(Word("hello"), 'a'));
    CHECK(char_in_word(Word("hello"), 'h'));
    CHECK(char_in_word(Word("hello"), 'l'));

    CHECK(count_distinct_chars(Word("hello")) == 4);
    CHECK(count_distinct_chars(Word("aaaa")) == 1);
    CHECK(count_distinct_chars(Word("information")) == 8);
}

TEST_CASE("task names round-trip") {
    for (TaskKind task : {TaskKind::Deletion, TaskKind::Insertion, TaskKind::Substitution}) {
        CHECK(parse_task(task_name(task)) == task);
    }
    CHECK_THROWS_AS(parse_task("swap"), config_error);
}

namespace {

std::string random_word(Rng& rng, std::size_t max_len, int alphabet) {
    const std::size_t len = 1 + uniform_below(rng, max_len);
    std::string word;
    for (std::size_t i = 0; i < len; ++i) {
        word.push_back(static_cast<char>('a' + uniform_below(rng, alphabet)));
    }
    return word;
}

}  // namespace

TEST_CASE("operation properties on random words") {
    Rng rng(2024);
    for (int iter = 0; iter < 400; ++iter) {
        const std::string text = random_word(rng, 12, 6);
        const Word word(text);
        const char target = static_cast<char>('a' + uniform_below(rng, 6));
        const char repl = static_cast<char>('a' + uniform_below(rng, 6));
        const std::size_t occurrences = count_occurrences(text, target);

        // Deletion: target gone, length accounts for every occurrence, and the
        // remainder is a subsequence of the original.
        const std::string deleted = delete_chars(word, target);
        CHECK(deleted.find(target) == std::string::npos);
        CHECK(deleted.size() == text.size() - occurrences);
        std::size_t cursor = 0;
        for (char c : deleted) {
            cursor = text.find(c, cursor);
            REQUIRE(cursor != std::string::npos);
            ++cursor;
        }

        // Insertion: one new character per original anchor; removing the
        // characters right after original anchor positions recovers the word.
        const std::string inserted = insert_after(word, target, repl);
        CHECK(inserted.size() == text.size() + occurrences);
        std::string recovered;
        for (std::size_t i = 0, j = 0; i < inserted.size(); ++i) {
            recovered.push_back(inserted[i]);
            if (j < text.size() && text[j] == target) ++i;  // skip the inserted char
            ++j;
        }
        CHECK(recovered == text);

        // Substitution with target != replacement moves every occurrence over.
        if (target != repl) {
            const std::string substituted = substitute(word, target, repl);
            CHECK(substituted.find(target) == std::string::npos);
            CHECK(substituted.size() == text.size());
            CHECK(count_occurrences(substituted, repl) ==
                  count_occurrences(text, repl) + occurrences);
        }
        CHECK(substitute(word, target, target) == text);

        // First-occurrence-only equals the full op for <= 1 occurrence.
        if (occurrences <= 1) {
            for (const CharOp& op : {CharOp::deletion(target), CharOp::insertion(target, repl),
                                     CharOp::substitution(target, repl)}) {
                CHECK(apply_op_first_occurrence_only(word, op) == apply_op(word, op));
            }
        }
    }
}

TEST_CASE("agreement with the naive reference on short words over {a,b,c}") {
    std::vector<std::string> words;
    const char alphabet[] = {'a', 'b', 'c'};
    std::vector<std::string> frontier = {""};
    for (int len = 1; len <= 4; ++len) {
        std::vector<std::string> next;
        for (const std::string& prefix : frontier) {
            for (char c : alphabet) next.push_back(prefix + c);
        }
        words.insert(words.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    for (const std::string& text : words) {
        const Word word(text);
        for (char target : alphabet) {
            CHECK(delete_chars(word, target) == testoracle::naive_delete(text, target));
            for (char repl : alphabet) {
                CHECK(insert_after(word, target, repl) ==
                      testoracle::naive_insert(text, target, repl));
                CHECK(substitute(word, target, repl) ==
                      testoracle::naive_substitute(text, target, repl));
            }
        }
    }
}
