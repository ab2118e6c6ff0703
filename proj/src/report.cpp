// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "atomize/errors.hpp"
#include "atomize/io.hpp"
#include "atomize/perturb.hpp"

namespace atomize {

namespace {

using nlohmann::json;

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

json stat_to_json(const CountStat& stat) {
    return {{"correct", stat.correct}, {"n", stat.n}, {"value", stat.value()}};
}

CountStat stat_from_json(const json& j) {
    CountStat stat;
    stat.correct = j.value("correct", static_cast<std::size_t>(0));
    stat.n = j.value("n", static_cast<std::size_t>(0));
    return stat;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string format_accuracy(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<EvalRecord>& records) {
    std::string out;
    for (const EvalRecord& record : records) {
        const json line = {
            {"id", record.id},
            {"prediction", record.prediction},
            {"expected", record.expected},
            {"em", record.em},
            {"error_class", std::string(error_class_name(record.error_class))},
        };
        out += line.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_report_json(const std::filesystem::path& path, const EvalReport& report) {
    json per_task = json::object();
    for (const auto& [task, stat] : report.per_task) per_task[task] = stat_to_json(stat);

    json per_length = json::array();
    for (std::size_t i = 0; i < kLengthBucketLabels.size(); ++i) {
        json bucket = stat_to_json(report.per_length[i]);
        bucket["bucket"] = std::string(kLengthBucketLabels[i]);
        per_length.push_back(std::move(bucket));
    }

    const json doc = {
        {"accuracy", stat_to_json(report.overall)},
        {"per_task", per_task},
        {"per_length", per_length},
        {"error_histogram", report.error_histogram},
        {"metadata",
         {{"strategy", report.strategy},
          {"target", report.target},
          {"dataset", report.dataset},
          {"strict_case", report.strict_case},
          {"timestamp", report.timestamp}}},
    };
    write_file_atomic(path, doc.dump(2) + "\n");
}

EvalReport read_report_json(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw parse_error("report " + path.string() + ": " + e.what());
    }
    EvalReport report;
    report.overall = stat_from_json(doc.at("accuracy"));
    for (const auto& [task, stat] : doc.at("per_task").items()) {
        report.per_task[task] = stat_from_json(stat);
    }
    const json& per_length = doc.at("per_length");
    for (std::size_t i = 0; i < kLengthBucketLabels.size() && i < per_length.size(); ++i) {
        report.per_length[i] = stat_from_json(per_length[i]);
    }
    for (const auto& [name, count] : doc.at("error_histogram").items()) {
        report.error_histogram[name] = count.get<std::size_t>();
    }
    const json& meta = doc.at("metadata");
    report.strategy = meta.value("strategy", "");
    report.target = meta.value("target", "");
    report.dataset = meta.value("dataset", "");
    report.strict_case = meta.value("strict_case", false);
    report.timestamp = meta.value("timestamp", "");
    return report;
}

TableRow table_row_from_report(const EvalReport& report) {
    TableRow row;
    row.strategy = report.strategy;
    row.target = report.target;
    const auto find = [&](const char* task) -> std::optional<double> {
        const auto it = report.per_task.find(task);
        if (it == report.per_task.end() || it->second.n == 0) return std::nullopt;
        return it->second.value();
    };
    row.del = find("deletion");
    row.ins = find("insertion");
    row.sub = find("substitution");
    return row;
}

void write_table_csv(const std::filesystem::path& path, const std::vector<TableRow>& rows) {
    std::string out = "strategy,target,Del,Ins,Sub\n";
    for (const TableRow& row : rows) {
        out += row.strategy;
        out += ',';
        out += row.target;
        out += ',';
        out += row.del ? format_accuracy(*row.del) : "";
        out += ',';
        out += row.ins ? format_accuracy(*row.ins) : "";
        out += ',';
        out += row.sub ? format_accuracy(*row.sub) : "";
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<LengthRow> length_rows_from_report(const EvalReport& report) {
    std::vector<LengthRow> rows;
    rows.reserve(kLengthBucketLabels.size());
    for (std::size_t i = 0; i < kLengthBucketLabels.size(); ++i) {
        LengthRow row;
        row.strategy = report.strategy;
        row.target = report.target;
        row.bucket = std::string(kLengthBucketLabels[i]);
        row.n = report.per_length[i].n;
        if (row.n > 0) row.accuracy = report.per_length[i].value();
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_lengths_csv(const std::filesystem::path& path, const std::vector<LengthRow>& rows) {
    std::string out = "strategy,target,bucket,n,accuracy\n";
    for (const LengthRow& row : rows) {
        out += row.strategy;
        out += ',';
        out += row.target;
        out += ',';
        out += row.bucket;
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += row.accuracy ? format_accuracy(*row.accuracy) : "";
        out += '\n';
    }
    write_file_atomic(path, out);
}

LengthSeries length_series_from_report(const EvalReport& report) {
    LengthSeries series;
    series.label = report.strategy.empty() ? report.target
                                           : report.strategy + " / " + report.target;
    for (const CountStat& stat : report.per_length) {
        series.accuracy.push_back(stat.n > 0 ? std::optional<double>(stat.value())
                                             : std::nullopt);
    }
    return series;
}

void write_lengths_svg(const std::filesystem::path& path,
                       const std::vector<LengthSeries>& series) {
    constexpr double kWidth = 640, kHeight = 400;
    constexpr double kLeft = 60, kRight = 20, kTop = 24, kBottom = 52;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const std::size_t buckets = kLengthBucketLabels.size();

    const auto x_of = [&](std::size_t i) {
        return kLeft + plot_w * (buckets == 1 ? 0.5
                                              : static_cast<double>(i) /
                                                    static_cast<double>(buckets - 1));
    };
    const auto y_of = [&](double accuracy) { return kTop + plot_h * (1.0 - accuracy); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // Axes and y grid.
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << (kTop + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << (kTop + plot_h) << "\" x2=\""
        << (kLeft + plot_w) << "\" y2=\"" << (kTop + plot_h) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double value = tick * 0.25;
        const double y = y_of(value);
        svg << "  <line x1=\"" << kLeft << "\" y1=\"" << format_coord(y) << "\" x2=\""
            << (kLeft + plot_w) << "\" y2=\"" << format_coord(y)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "  <text x=\"" << (kLeft - 8) << "\" y=\"" << format_coord(y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << format_accuracy(value)
            << "</text>\n";
    }
    for (std::size_t i = 0; i < buckets; ++i) {
        svg << "  <text x=\"" << format_coord(x_of(i)) << "\" y=\""
            << format_coord(kTop + plot_h + 18) << "\" font-size=\"12\" text-anchor=\"middle\">"
            << xml_escape(kLengthBucketLabels[i]) << "</text>\n";
    }
    svg << "  <text x=\"" << (kLeft + plot_w / 2) << "\" y=\"" << (kHeight - 14)
        << "\" font-size=\"13\" text-anchor=\"middle\">word length</text>\n";
    svg << "  <text x=\"16\" y=\"" << (kTop + plot_h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (kTop + plot_h / 2) << ")\">accuracy</text>\n";

    // Series polylines, broken at empty buckets.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % std::size(kPalette)];
        std::string points;
        const auto flush = [&] {
            if (!points.empty()) {
                svg << "  <polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < buckets && i < series[s].accuracy.size(); ++i) {
            if (!series[s].accuracy[i].has_value()) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += format_coord(x_of(i)) + "," + format_coord(y_of(*series[s].accuracy[i]));
            svg << "  <circle cx=\"" << format_coord(x_of(i)) << "\" cy=\""
                << format_coord(y_of(*series[s].accuracy[i])) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        flush();
        // Legend entry.
        const double legend_y = kTop + 16 * static_cast<double>(s);
        svg << "  <line x1=\"" << (kLeft + plot_w - 150) << "\" y1=\"" << format_coord(legend_y)
            << "\" x2=\"" << (kLeft + plot_w - 126) << "\" y2=\"" << format_coord(legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "  <text x=\"" << (kLeft + plot_w - 120) << "\" y=\""
            << format_coord(legend_y + 4) << "\" font-size=\"12\">" << xml_escape(series[s].label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    write_file_atomic(path, svg.str());
}

void write_error_histogram_svg(const std::filesystem::path& path, const EvalReport& report) {
    constexpr double kWidth = 520, kHeight = 360;
    constexpr double kLeft = 60, kRight = 20, kTop = 24, kBottom = 80;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::vector<std::pair<std::string, std::size_t>> bars(report.error_histogram.begin(),
                                                          report.error_histogram.end());
    std::size_t max_count = 1;
    for (const auto& [name, count] : bars) max_count = std::max(max_count, count);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << (kTop + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << kLeft << "\" y1=\"" << (kTop + plot_h) << "\" x2=\""
        << (kLeft + plot_w) << "\" y2=\"" << (kTop + plot_h) << "\" stroke=\"black\"/>\n";

    const double slot = plot_w / static_cast<double>(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double height = plot_h * static_cast<double>(bars[i].second) /
                              static_cast<double>(max_count);
        const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
        const double y = kTop + plot_h - height;
        svg << "  <rect x=\"" << format_coord(x) << "\" y=\"" << format_coord(y) << "\" width=\""
            << format_coord(slot * 0.7) << "\" height=\"" << format_coord(height)
            << "\" fill=\"" << kPalette[i % std::size(kPalette)] << "\"/>\n";
        svg << "  <text x=\"" << format_coord(x + slot * 0.35) << "\" y=\""
            << format_coord(y - 6) << "\" font-size=\"12\" text-anchor=\"middle\">"
            << bars[i].second << "</text>\n";
        svg << "  <text x=\"" << format_coord(x + slot * 0.35) << "\" y=\""
            << format_coord(kTop + plot_h + 16) << "\" font-size=\"10\" text-anchor=\"middle\" "
            << "transform=\"rotate(20 " << format_coord(x + slot * 0.35) << " "
            << format_coord(kTop + plot_h + 16) << ")\">" << xml_escape(bars[i].first)
            << "</text>\n";
    }
    svg << "</svg>\n";
    write_file_atomic(path, svg.str());
}

void write_ablation_csv(const std::filesystem::path& path,
                        const std::vector<AblationCell>& cells) {
    std::string out = "stage,shots,n,correct,errors,accuracy\n";
    for (const AblationCell& cell : cells) {
        out += std::to_string(cell.stage);
        out += ',';
        out += std::to_string(cell.shots);
        out += ',';
        out += std::to_string(cell.n);
        out += ',';
        out += std::to_string(cell.correct);
        out += ',';
        out += std::to_string(cell.errors);
        out += ',';
        out += cell.n > 0
                   ? format_accuracy(static_cast<double>(cell.correct) /
                                     static_cast<double>(cell.n))
                   : "";
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_retrieval_csv(const std::filesystem::path& path, const DiagnosticReport& report) {
    std::string out = "letter,true_positive,false_positive,true_negative,false_negative,"
                      "abstentions,fp_tp_ratio\n";
    for (std::size_t i = 0; i < 26; ++i) {
        const LetterCounts& counts = report.retrieval[i];
        out += static_cast<char>('a' + i);
        out += ',';
        out += std::to_string(counts.true_positive);
        out += ',';
        out += std::to_string(counts.false_positive);
        out += ',';
        out += std::to_string(counts.true_negative);
        out += ',';
        out += std::to_string(counts.false_negative);
        out += ',';
        out += std::to_string(counts.abstentions);
        out += ',';
        // Undefined only when there are false positives but no true positives.
        if (counts.false_positive == 0) {
            out += "0.000";
        } else if (counts.true_positive > 0) {
            out += format_accuracy(static_cast<double>(counts.false_positive) /
                                   static_cast<double>(counts.true_positive));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_counting_csv(const std::filesystem::path& path, const DiagnosticReport& report) {
    std::string out = "word,actual,predicted\n";
    for (const CountingOutcome& outcome : report.counting) {
        out += outcome.word;
        out += ',';
        out += std::to_string(outcome.actual);
        out += ',';
        if (outcome.predicted) out += std::to_string(*outcome.predicted);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_spelling_csv(const std::filesystem::path& path, const DiagnosticReport& report) {
    std::string out = "word,expected,predicted,em\n";
    for (const SpellingOutcome& outcome : report.spelling) {
        out += outcome.word;
        out += ',';
        // Spelled forms use spaces, never commas; plain CSV stays valid.
        out += atomize(std::string_view(outcome.word));
        out += ',';
        out += outcome.predicted;
        out += ',';
        out += outcome.em ? "1" : "0";
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace atomize
