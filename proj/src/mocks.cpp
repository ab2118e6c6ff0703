// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic stand-in models. Each behavior parses the incoming prompt
// back into (task, sequence, characters) and answers from the ground-truth
// operations, optionally reproducing a known failure mode. Fixed (behavior,
// seed, prompt) always yields the same reply.

#include <set>

#include "atomize/core_ops.hpp"
#include "atomize/gateway.hpp"
#include "atomize/perturb.hpp"
#include "atomize/prompts.hpp"
#include "atomize/rng.hpp"

namespace atomize {

namespace {

std::string strip_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != ' ') out.push_back(c);
    }
    return out;
}

std::string answer_line(std::string_view answer) {
    std::string out = "Answer: \"";
    out += answer;
    out += '"';
    return out;
}

bool is_manipulation(ParsedPrompt::Kind kind) {
    using Kind = ParsedPrompt::Kind;
    switch (kind) {
        case Kind::BaselineDeletion:
        case Kind::BaselineInsertion:
        case Kind::BaselineSubstitution:
        case Kind::Stage2Deletion:
        case Kind::Stage2Insertion:
        case Kind::Stage2Substitution:
            return true;
        default:
            return false;
    }
}

bool is_spaced_stage(ParsedPrompt::Kind kind) {
    using Kind = ParsedPrompt::Kind;
    return kind == Kind::Stage2Deletion || kind == Kind::Stage2Insertion ||
           kind == Kind::Stage2Substitution;
}

CharOp op_of(const ParsedPrompt& parsed) {
    using Kind = ParsedPrompt::Kind;
    switch (parsed.kind) {
        case Kind::BaselineDeletion:
        case Kind::Stage2Deletion:
            return CharOp::deletion(parsed.target);
        case Kind::BaselineInsertion:
        case Kind::Stage2Insertion:
            return CharOp::insertion(parsed.target, parsed.replacement);
        default:
            return CharOp::substitution(parsed.target, parsed.replacement);
    }
}

/// Per-instance trigger decision for the probabilistic behaviors. Hashing the
/// characters being manipulated (spaces removed) keeps every stage of one
/// instance consistent.
bool triggered(const MockConfig& config, const ParsedPrompt& parsed,
               const std::string& letters) {
    if (config.probability >= 1.0) return true;
    if (config.probability <= 0.0) return false;
    std::string material = config.behavior;
    material += '\x1f';
    material += letters;
    material += '\x1f';
    material += parsed.target;
    material += parsed.replacement;
    const std::uint64_t h = fnv1a64(material, config.seed);
    return static_cast<double>(h % 1000000ull) < config.probability * 1000000.0;
}

std::string oracle_answer(const ParsedPrompt& parsed) {
    using Kind = ParsedPrompt::Kind;
    switch (parsed.kind) {
        case Kind::Stage1Atomize:
        case Kind::DiagSpelling:
            return atomize(std::string_view(parsed.sequence));
        case Kind::Stage3Join:
            return strip_spaces(parsed.sequence);
        case Kind::DiagRetrieval:
            return parsed.sequence.find(parsed.target) != std::string::npos ? "Yes" : "No";
        case Kind::DiagCounting: {
            const std::set<char> distinct(parsed.sequence.begin(), parsed.sequence.end());
            return std::to_string(distinct.size());
        }
        default: {
            const std::string letters = strip_spaces(parsed.sequence);
            const std::string result = apply_op(letters, op_of(parsed));
            return is_spaced_stage(parsed.kind) ? atomize(std::string_view(result)) : result;
        }
    }
}

}  // namespace

const std::vector<MockBehaviorInfo>& mock_behaviors() {
    static const std::vector<MockBehaviorInfo> kCatalog = {
        {"oracle", "always answers with the ground-truth result"},
        {"autocorrect[:p]",
         "with per-instance probability p (default 1), skips the requested modification and "
         "returns the input unchanged; otherwise correct"},
        {"first_only[:p]",
         "with per-instance probability p (default 1), applies the operation only at the first "
         "occurrence of the target; otherwise correct"},
        {"length_fail[:N]",
         "correct for words of up to N characters (default 6), echoes the input beyond that"},
        {"garbage", "replies with text that carries no Answer: marker"},
    };
    return kCatalog;
}

std::string mock_reply(const MockConfig& config, const std::string& user_message) {
    if (config.behavior == "garbage") {
        return "I looked at the request but the output did not come together.\nno final result";
    }

    const std::optional<ParsedPrompt> parsed = parse_prompt(user_message);
    if (!parsed) {
        return "unrecognized request\nno final result";
    }

    const std::string letters = strip_spaces(parsed->sequence);

    if (config.behavior == "autocorrect" && is_manipulation(parsed->kind) &&
        triggered(config, *parsed, letters)) {
        // Reverts the modification: the sequence comes back untouched.
        return answer_line(parsed->sequence);
    }

    if (config.behavior == "first_only" && is_manipulation(parsed->kind) &&
        triggered(config, *parsed, letters)) {
        const std::string result = apply_op_first_occurrence_only(letters, op_of(*parsed));
        return answer_line(is_spaced_stage(parsed->kind) ? atomize(std::string_view(result))
                                                         : result);
    }

    if (config.behavior == "length_fail" && letters.size() > config.length_limit) {
        // Echo without even matching the requested output format.
        return parsed->sequence;
    }

    return answer_line(oracle_answer(*parsed));
}

}  // namespace atomize
