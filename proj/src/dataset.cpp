// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "atomize/errors.hpp"
#include "atomize/io.hpp"
#include "atomize/rng.hpp"

namespace atomize {

namespace {

using nlohmann::json;

std::string normalize_entry(std::string_view raw) {
    // Kaggle-style rows are "word,count"; keep only the first field.
    std::string token(raw.substr(0, raw.find(',')));
    // Trim surrounding whitespace.
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) return {};
    token = token.substr(first, last - first + 1);
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return is_valid_word(token) ? token : std::string{};
}

std::string zero_padded(std::size_t value) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%05zu", value);
    return buf;
}

}  // namespace

WordList load_word_list(const std::filesystem::path& path, std::size_t limit) {
    const std::vector<std::string> lines = read_lines(path);

    WordList list;
    list.source = path.string();
    std::unordered_set<std::string> seen;
    std::size_t start = 0;
    // Skip a "word,count" style header row.
    if (!lines.empty()) {
        std::string lowered = lines[0];
        for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lowered == "word,count" || lowered == "word count" || lowered == "word") start = 1;
    }
    for (std::size_t i = start; i < lines.size() && list.words.size() < limit; ++i) {
        std::string word = normalize_entry(lines[i]);
        if (word.empty()) continue;
        if (!seen.insert(word).second) continue;
        list.words.emplace_back(std::move(word));
    }
    if (list.words.size() < limit) {
        std::ostringstream warn;
        warn << "word list " << path.string() << " yielded " << list.words.size()
             << " valid words, fewer than the requested " << limit;
        list.warnings.push_back(warn.str());
    }
    return list;
}

WordList builtin_word_list(std::size_t limit) {
    static const char* kWords[] = {
        "the",   "of",    "and",   "a",     "to",    "in",    "is",    "you",   "that",  "it",
        "he",    "was",   "for",   "on",    "are",   "as",    "with",  "his",   "they",  "i",
        "at",    "be",    "this",  "have",  "from",  "or",    "one",   "had",   "by",    "word",
        "but",   "not",   "what",  "all",   "were",  "we",    "when",  "your",  "can",   "said",
        "there", "use",   "an",    "each",  "which", "she",   "do",    "how",   "their", "if"};
    WordList list;
    list.source = "builtin";
    const std::size_t n = std::min(limit, std::size(kWords));
    list.words.reserve(n);
    for (std::size_t i = 0; i < n; ++i) list.words.emplace_back(std::string(kWords[i]));
    return list;
}

TaskInstance make_instance(std::string id, TaskKind task, Word word, CharOp op) {
    validate_op(op);
    if (op.kind != task) throw validation_error("instance task does not match op kind: " + id);
    const std::size_t occurrences = count_occurrences(word.text(), op.target);
    if (occurrences == 0) {
        throw validation_error("instance target does not occur in word: " + id);
    }
    if (task == TaskKind::Substitution && op.replacement == op.target) {
        throw validation_error("substitution replacement must differ from target: " + id);
    }
    std::string expected = apply_op(word, op);
    TaskInstance inst{std::move(id), task,        std::move(word),
                      op,            std::move(expected), 0,
                      occurrences};
    inst.word_length = inst.word.length();
    return inst;
}

std::vector<TaskInstance> generate_instances(const WordList& list, TaskKind task,
                                             std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TaskInstance> instances;
    instances.reserve(list.words.size());
    for (std::size_t rank = 0; rank < list.words.size(); ++rank) {
        const Word& word = list.words[rank];
        const std::string& text = word.text();
        const char target = text[uniform_below(rng, text.size())];

        CharOp op = CharOp::deletion(target);
        if (task == TaskKind::Insertion) {
            op = CharOp::insertion(target, static_cast<char>('a' + uniform_below(rng, 26)));
        } else if (task == TaskKind::Substitution) {
            // Uniform over the 25 letters != target.
            char repl = static_cast<char>('a' + uniform_below(rng, 25));
            if (repl >= target) repl = static_cast<char>(repl + 1);
            op = CharOp::substitution(target, repl);
        }

        std::string id;
        id.append(task_name(task));
        id.push_back('-');
        id.append(text);
        id.push_back('-');
        id.append(zero_padded(rank));
        instances.push_back(make_instance(std::move(id), task, word, op));
    }
    return instances;
}

void write_dataset(const std::filesystem::path& path, const std::vector<TaskInstance>& instances) {
    std::string out;
    for (const TaskInstance& inst : instances) {
        json line = {
            {"id", inst.id},
            {"task", std::string(task_name(inst.task))},
            {"word", inst.word.text()},
            {"target", std::string(1, inst.op.target)},
            {"expected", inst.expected},
        };
        if (inst.op.replacement) line["replacement"] = std::string(1, *inst.op.replacement);
        out += line.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<TaskInstance> read_dataset(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<TaskInstance> instances;
    instances.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        json line;
        try {
            line = json::parse(lines[i]);
        } catch (const json::exception& e) {
            throw parse_error("dataset line " + std::to_string(i + 1) + ": " + e.what());
        }
        const auto single_char = [&](const std::string& field) -> char {
            const std::string value = line.at(field).get<std::string>();
            if (value.size() != 1) {
                throw validation_error("dataset line " + std::to_string(i + 1) + ": field '" +
                                       field + "' must be a single character, got \"" + value +
                                       "\"");
            }
            return value[0];
        };
        const TaskKind task = parse_task(line.at("task").get<std::string>());
        const char target = single_char("target");
        CharOp op = CharOp::deletion(target);
        if (task == TaskKind::Insertion) {
            op = CharOp::insertion(target, single_char("replacement"));
        } else if (task == TaskKind::Substitution) {
            op = CharOp::substitution(target, single_char("replacement"));
        }
        TaskInstance inst = make_instance(line.at("id").get<std::string>(), task,
                                          Word(line.at("word").get<std::string>()), op);
        if (line.contains("expected") &&
            line.at("expected").get<std::string>() != inst.expected) {
            throw validation_error("dataset line " + std::to_string(i + 1) +
                                   ": expected field disagrees with the oracle");
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

}  // namespace atomize
