// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// Report artifacts: report.json, records.jsonl, the Del/Ins/Sub accuracy
// table, the accuracy-by-length table, and static SVG charts. Everything is a
// pure function of its inputs; only report.json carries a timestamp.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atomize/eval.hpp"
#include "atomize/runner.hpp"

namespace atomize {

/// "0.948"-style fixed three-decimal accuracy.
std::string format_accuracy(double value);

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<EvalRecord>& records);

void write_report_json(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report_json(const std::filesystem::path& path);

/// One row of the Del/Ins/Sub table.
struct TableRow {
    std::string strategy;
    std::string target;
    std::optional<double> del;
    std::optional<double> ins;
    std::optional<double> sub;
};

TableRow table_row_from_report(const EvalReport& report);
void write_table_csv(const std::filesystem::path& path, const std::vector<TableRow>& rows);

struct LengthRow {
    std::string strategy;
    std::string target;
    std::string bucket;
    std::size_t n = 0;
    std::optional<double> accuracy;  // absent when the bucket is empty
};

std::vector<LengthRow> length_rows_from_report(const EvalReport& report);
void write_lengths_csv(const std::filesystem::path& path, const std::vector<LengthRow>& rows);

/// Accuracy-vs-length line chart. One polyline per series; missing buckets
/// break the line.
struct LengthSeries {
    std::string label;
    std::vector<std::optional<double>> accuracy;  // kLengthBucketLabels order
};

LengthSeries length_series_from_report(const EvalReport& report);
void write_lengths_svg(const std::filesystem::path& path,
                       const std::vector<LengthSeries>& series);

void write_error_histogram_svg(const std::filesystem::path& path, const EvalReport& report);

void write_ablation_csv(const std::filesystem::path& path,
                        const std::vector<AblationCell>& cells);

void write_retrieval_csv(const std::filesystem::path& path, const DiagnosticReport& report);
void write_counting_csv(const std::filesystem::path& path, const DiagnosticReport& report);
void write_spelling_csv(const std::filesystem::path& path, const DiagnosticReport& report);

}  // namespace atomize
