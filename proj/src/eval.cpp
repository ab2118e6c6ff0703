// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/eval.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "atomize/errors.hpp"

namespace atomize {

namespace {

std::string lowercased(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::Correct: return "Correct";
        case ErrorClass::TypeI_AutoCorrection: return "TypeI_AutoCorrection";
        case ErrorClass::TypeII_MultiTarget: return "TypeII_MultiTarget";
        case ErrorClass::Other: return "Other";
    }
    return "Other";
}

ErrorClass parse_error_class(std::string_view name) {
    if (name == "Correct") return ErrorClass::Correct;
    if (name == "TypeI_AutoCorrection") return ErrorClass::TypeI_AutoCorrection;
    if (name == "TypeII_MultiTarget") return ErrorClass::TypeII_MultiTarget;
    if (name == "Other") return ErrorClass::Other;
    throw parse_error("unknown error class: " + std::string(name));
}

bool exact_match(std::string_view prediction, std::string_view expected, bool strict_case) {
    if (strict_case) return prediction == expected;
    if (prediction.size() != expected.size()) return false;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(prediction[i])) !=
            std::tolower(static_cast<unsigned char>(expected[i]))) {
            return false;
        }
    }
    return true;
}

ErrorClass classify_error(const TaskInstance& instance, std::string_view prediction,
                          const std::unordered_set<std::string>* dictionary, bool strict_case) {
    if (exact_match(prediction, instance.expected, strict_case)) return ErrorClass::Correct;

    if (instance.target_occurrences >= 2 &&
        exact_match(prediction, apply_op_first_occurrence_only(instance.word, instance.op),
                    strict_case)) {
        return ErrorClass::TypeII_MultiTarget;
    }

    if (exact_match(prediction, instance.word.text(), strict_case)) {
        return ErrorClass::TypeI_AutoCorrection;
    }
    if (dictionary != nullptr) {
        const bool pred_is_word = dictionary->count(lowercased(prediction)) > 0;
        const bool expected_is_word = dictionary->count(lowercased(instance.expected)) > 0;
        if (pred_is_word && !expected_is_word) return ErrorClass::TypeI_AutoCorrection;
    }
    return ErrorClass::Other;
}

std::size_t length_bucket_index(std::size_t word_length) {
    if (word_length <= 3) return 0;
    if (word_length >= 10) return 7;
    return word_length - 3;  // 4 -> 1 ... 9 -> 6
}

std::vector<EvalRecord> score_predictions(
    const std::vector<TaskInstance>& instances,
    const std::vector<std::pair<std::string, std::string>>& predictions_by_id,
    const std::unordered_set<std::string>* dictionary, bool strict_case) {
    std::unordered_map<std::string_view, const TaskInstance*> by_id;
    by_id.reserve(instances.size());
    for (const TaskInstance& inst : instances) by_id.emplace(inst.id, &inst);

    std::vector<std::string> orphans;
    std::vector<EvalRecord> records;
    records.reserve(predictions_by_id.size());
    for (const auto& [id, prediction] : predictions_by_id) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            orphans.push_back(id);
            continue;
        }
        const TaskInstance& inst = *it->second;
        EvalRecord record;
        record.id = id;
        record.prediction = prediction;
        record.expected = inst.expected;
        record.error_class = classify_error(inst, prediction, dictionary, strict_case);
        record.em = record.error_class == ErrorClass::Correct;
        records.push_back(std::move(record));
    }
    if (!orphans.empty()) {
        std::string what = "records with no matching dataset instance:";
        for (const std::string& id : orphans) {
            what += ' ';
            what += id;
        }
        throw join_error(what, std::move(orphans));
    }
    std::sort(records.begin(), records.end(),
              [](const EvalRecord& a, const EvalRecord& b) { return a.id < b.id; });
    return records;
}

EvalReport aggregate(const std::vector<EvalRecord>& records,
                     const std::vector<TaskInstance>& instances) {
    std::unordered_map<std::string_view, const TaskInstance*> by_id;
    by_id.reserve(instances.size());
    for (const TaskInstance& inst : instances) by_id.emplace(inst.id, &inst);

    EvalReport report;
    for (std::string_view name :
         {"Correct", "TypeI_AutoCorrection", "TypeII_MultiTarget", "Other"}) {
        report.error_histogram[std::string(name)] = 0;
    }

    std::vector<std::string> orphans;
    for (const EvalRecord& record : records) {
        const auto it = by_id.find(record.id);
        if (it == by_id.end()) {
            orphans.push_back(record.id);
            continue;
        }
        const TaskInstance& inst = *it->second;
        report.overall.n += 1;
        CountStat& task_stat = report.per_task[std::string(task_name(inst.task))];
        task_stat.n += 1;
        CountStat& bucket = report.per_length[length_bucket_index(inst.word_length)];
        bucket.n += 1;
        if (record.em) {
            report.overall.correct += 1;
            task_stat.correct += 1;
            bucket.correct += 1;
        }
        report.error_histogram[std::string(error_class_name(record.error_class))] += 1;
    }
    if (!orphans.empty()) {
        std::string what = "records with no matching dataset instance:";
        for (const std::string& id : orphans) {
            what += ' ';
            what += id;
        }
        throw join_error(what, std::move(orphans));
    }
    return report;
}

std::unordered_set<std::string> dictionary_from_instances(
    const std::vector<TaskInstance>& instances) {
    std::unordered_set<std::string> dictionary;
    dictionary.reserve(instances.size());
    for (const TaskInstance& inst : instances) dictionary.insert(inst.word.text());
    return dictionary;
}

}  // namespace atomize
