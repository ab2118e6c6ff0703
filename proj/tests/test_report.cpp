// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/report.hpp"

#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"

using namespace atomize;

namespace {

EvalReport sample_report() {
    EvalReport report;
    report.overall = {948, 1000};
    report.per_task["deletion"] = {948, 1000};
    report.per_length[0] = {10, 10};
    report.per_length[3] = {90, 100};
    report.per_length[7] = {40, 80};
    report.error_histogram = {{"Correct", 948},
                              {"TypeI_AutoCorrection", 30},
                              {"TypeII_MultiTarget", 20},
                              {"Other", 2}};
    report.strategy = "fs1";
    report.target = "mock:oracle";
    report.dataset = "del.jsonl";
    report.timestamp = "2026-01-01T00:00:00Z";
    return report;
}

}  // namespace

TEST_CASE("accuracies format with three decimals") {
    CHECK(format_accuracy(1.0) == "1.000");
    CHECK(format_accuracy(0.0) == "0.000");
    CHECK(format_accuracy(0.9484) == "0.948");
    CHECK(format_accuracy(1.0 / 3.0) == "0.333");
}

TEST_CASE("report json round trip") {
    testutil::TempDir dir;
    const EvalReport report = sample_report();
    write_report_json(dir / "report.json", report);

    const EvalReport loaded = read_report_json(dir / "report.json");
    CHECK(loaded.overall.correct == 948);
    CHECK(loaded.overall.n == 1000);
    CHECK(loaded.per_task.at("deletion").correct == 948);
    CHECK(loaded.per_length[3].n == 100);
    CHECK(loaded.error_histogram.at("TypeII_MultiTarget") == 20);
    CHECK(loaded.strategy == "fs1");
    CHECK(loaded.target == "mock:oracle");
    CHECK(loaded.timestamp == "2026-01-01T00:00:00Z");
}

TEST_CASE("table csv shape") {
    testutil::TempDir dir;
    const TableRow row = table_row_from_report(sample_report());
    write_table_csv(dir / "table.csv", {row});
    CHECK(testutil::slurp(dir / "table.csv") ==
          "strategy,target,Del,Ins,Sub\nfs1,mock:oracle,0.948,,\n");
}

TEST_CASE("lengths csv lists every bucket") {
    testutil::TempDir dir;
    const auto rows = length_rows_from_report(sample_report());
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].bucket == "<=3");
    CHECK(rows[0].n == 10);
    write_lengths_csv(dir / "lengths.csv", rows);
    const std::string csv = testutil::slurp(dir / "lengths.csv");
    CHECK(csv.find("strategy,target,bucket,n,accuracy\n") == 0);
    CHECK(csv.find("fs1,mock:oracle,<=3,10,1.000\n") != std::string::npos);
    CHECK(csv.find("fs1,mock:oracle,6,100,0.900\n") != std::string::npos);
    CHECK(csv.find("fs1,mock:oracle,>=10,80,0.500\n") != std::string::npos);
    // Empty buckets carry no accuracy value.
    CHECK(csv.find("fs1,mock:oracle,4,0,\n") != std::string::npos);
}

TEST_CASE("svg charts are well-formed xml") {
    testutil::TempDir dir;
    const EvalReport report = sample_report();
    write_lengths_svg(dir / "lengths.svg", {length_series_from_report(report)});
    write_error_histogram_svg(dir / "errors.svg", report);

    const std::string lengths = testutil::slurp(dir / "lengths.svg");
    CHECK(lengths.find("<svg") != std::string::npos);
    CHECK(lengths.find("<polyline") != std::string::npos);
    CHECK(testutil::xml_well_formed(lengths));

    const std::string errors = testutil::slurp(dir / "errors.svg");
    CHECK(errors.find("<rect") != std::string::npos);
    CHECK(testutil::xml_well_formed(errors));
}

TEST_CASE("ablation csv") {
    testutil::TempDir dir;
    std::vector<AblationCell> cells;
    for (int stage = 1; stage <= 3; ++stage) {
        for (int shots = 0; shots <= 3; ++shots) {
            cells.push_back({stage, shots, 100, static_cast<std::size_t>(100 - shots), 0});
        }
    }
    write_ablation_csv(dir / "ablation.csv", cells);
    const std::string csv = testutil::slurp(dir / "ablation.csv");
    CHECK(csv.find("stage,shots,n,correct,errors,accuracy\n") == 0);
    CHECK(csv.find("1,0,100,100,0,1.000\n") != std::string::npos);
    CHECK(csv.find("3,3,100,97,0,0.970\n") != std::string::npos);
    // Header plus 12 cells.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("report writing is deterministic") {
    testutil::TempDir dir;
    const EvalReport report = sample_report();
    write_report_json(dir / "a.json", report);
    write_report_json(dir / "b.json", report);
    CHECK(testutil::slurp(dir / "a.json") == testutil::slurp(dir / "b.json"));

    write_lengths_svg(dir / "a.svg", {length_series_from_report(report)});
    write_lengths_svg(dir / "b.svg", {length_series_from_report(report)});
    CHECK(testutil::slurp(dir / "a.svg") == testutil::slurp(dir / "b.svg"));
}
