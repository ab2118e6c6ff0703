// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks through the installed binary: exit codes, file outputs,
// and the dataset -> run -> eval -> report pipeline with mock models.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "test_util.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(ATOMIZE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    std::size_t n = 0;
    while ((n = ::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, n);
    }
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace

TEST_CASE("version prints and exits cleanly") {
    const CliResult result = run_cli("version");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("atomize-bench") != std::string::npos);
}

TEST_CASE("unknown task exits 2 with a message") {
    testutil::TempDir dir;
    const CliResult result =
        run_cli("dataset gen --task swap --out " + (dir / "x.jsonl").string());
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("unknown task") != std::string::npos);
}

TEST_CASE("missing required flags exit 2") {
    const CliResult result = run_cli("run --strategy fs1");
    CHECK(result.exit_code == 2);
}

TEST_CASE("dnc-only flags are rejected for baseline strategies") {
    testutil::TempDir dir;
    const std::string dataset = (dir / "d.jsonl").string();
    REQUIRE(run_cli("dataset gen --task deletion --seed 1 --limit 3 --out " + dataset)
                .exit_code == 0);
    const CliResult result = run_cli("run --dataset " + dataset +
                                     " --strategy fs1 --mock oracle --no-cache "
                                     "--oracle-stage 2 --out " +
                                     (dir / "t.jsonl").string());
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("oracle-stage") != std::string::npos);
}

TEST_CASE("requiring exactly one of --mock and --model") {
    testutil::TempDir dir;
    const std::string dataset = (dir / "d.jsonl").string();
    REQUIRE(run_cli("dataset gen --task deletion --seed 1 --limit 3 --out " + dataset)
                .exit_code == 0);
    const CliResult neither = run_cli("run --dataset " + dataset +
                                      " --strategy fs1 --no-cache --out " +
                                      (dir / "t.jsonl").string());
    CHECK(neither.exit_code == 2);
    const CliResult both = run_cli("run --dataset " + dataset +
                                   " --strategy fs1 --mock oracle --model m --no-cache --out " +
                                   (dir / "t.jsonl").string());
    CHECK(both.exit_code == 2);
}

TEST_CASE("dataset generation is reproducible through the binary") {
    testutil::TempDir dir;
    const std::string a = (dir / "a.jsonl").string();
    const std::string b = (dir / "b.jsonl").string();
    CHECK(run_cli("dataset gen --task deletion --seed 7 --out " + a).exit_code == 0);
    CHECK(run_cli("dataset gen --task deletion --seed 7 --out " + b).exit_code == 0);
    const std::string bytes_a = testutil::slurp(a);
    CHECK_FALSE(bytes_a.empty());
    CHECK(bytes_a == testutil::slurp(b));

    const std::string c = (dir / "c.jsonl").string();
    CHECK(run_cli("dataset gen --task deletion --seed 8 --out " + c).exit_code == 0);
    CHECK(bytes_a != testutil::slurp(c));
}

TEST_CASE("dataset -> run -> eval -> report pipeline with the oracle mock") {
    testutil::TempDir dir;
    const std::string dataset = (dir / "del.jsonl").string();
    const std::string transcripts = (dir / "t.jsonl").string();
    const std::string evaldir = (dir / "eval").string();
    const std::string cache = (dir / "cache").string();

    CHECK(run_cli("dataset gen --task deletion --seed 7 --out " + dataset).exit_code == 0);

    const CliResult run = run_cli("run --dataset " + dataset +
                                  " --strategy dnc --mock oracle --cache " + cache + " --out " +
                                  transcripts);
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("wrote 50 transcripts") != std::string::npos);

    const CliResult eval = run_cli("eval --dataset " + dataset + " --transcripts " + transcripts +
                                   " --out-dir " + evaldir + " --svg");
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.find("accuracy 1.000") != std::string::npos);
    CHECK(std::filesystem::exists(evaldir + "/report.json"));
    CHECK(std::filesystem::exists(evaldir + "/records.jsonl"));
    CHECK(std::filesystem::exists(evaldir + "/table.csv"));
    CHECK(std::filesystem::exists(evaldir + "/lengths.csv"));
    CHECK(std::filesystem::exists(evaldir + "/lengths.svg"));
    CHECK(std::filesystem::exists(evaldir + "/errors.svg"));

    const std::string table = testutil::slurp(evaldir + "/table.csv");
    CHECK(table.find("dnc,mock:oracle,1.000,,") != std::string::npos);

    // Merge the single-run report into a combined table.
    const std::string reportdir = (dir / "merged").string();
    const CliResult merged = run_cli("report --in " + evaldir + "/report.json --out-dir " +
                                     reportdir + " --svg");
    CHECK(merged.exit_code == 0);
    CHECK(std::filesystem::exists(reportdir + "/table.csv"));
    CHECK(std::filesystem::exists(reportdir + "/lengths.svg"));
}

TEST_CASE("eval of an empty transcript file exits 3") {
    testutil::TempDir dir;
    const std::string dataset = (dir / "d.jsonl").string();
    CHECK(run_cli("dataset gen --task insertion --seed 1 --out " + dataset).exit_code == 0);
    testutil::spit(dir / "empty.jsonl", "");
    const CliResult result = run_cli("eval --dataset " + dataset + " --transcripts " +
                                     (dir / "empty.jsonl").string() + " --out-dir " +
                                     (dir / "out").string());
    CHECK(result.exit_code == 3);
    CHECK(result.output.find("no records") != std::string::npos);
}

TEST_CASE("ablate and diagnose emit their artifacts") {
    testutil::TempDir dir;
    const std::string dataset = (dir / "sub.jsonl").string();
    CHECK(run_cli("dataset gen --task substitution --seed 3 --limit 10 --out " + dataset)
              .exit_code == 0);

    const CliResult ablate = run_cli("ablate --dataset " + dataset +
                                     " --mock oracle --no-cache --shots 0,1 --out-dir " +
                                     (dir / "ablate").string());
    CHECK(ablate.exit_code == 0);
    const std::string grid = testutil::slurp(dir / "ablate" / "ablation.csv");
    CHECK(grid.find("1,0,10,10,0,1.000") != std::string::npos);
    CHECK(grid.find("3,1,10,10,0,1.000") != std::string::npos);

    const CliResult diagnose = run_cli("diagnose counting --mock oracle --no-cache --limit 8 "
                                       "--out-dir " +
                                       (dir / "diag").string());
    CHECK(diagnose.exit_code == 0);
    CHECK(diagnose.output.find("accuracy=1.000") != std::string::npos);
    const std::string counting = testutil::slurp(dir / "diag" / "counting.csv");
    CHECK(counting.find("word,actual,predicted") == 0);

    const CliResult retrieval = run_cli("diagnose retrieval --mock oracle --no-cache --limit 4 "
                                        "--out-dir " +
                                        (dir / "diag2").string());
    CHECK(retrieval.exit_code == 0);
    const std::string csv = testutil::slurp(dir / "diag2" / "retrieval.csv");
    CHECK(csv.find("letter,") == 0);
    // Oracle answers every probe; no false positives anywhere.
    CHECK(csv.find(",0.000") != std::string::npos);
}

TEST_CASE("run accepts a TOML config file") {
    testutil::TempDir dir;
    testutil::spit(dir / "cfg.toml", "concurrency = 2\n");
    const std::string dataset = (dir / "d.jsonl").string();
    CHECK(run_cli("dataset gen --task deletion --seed 2 --limit 5 --out " + dataset).exit_code ==
          0);
    const CliResult run = run_cli("run --dataset " + dataset +
                                  " --strategy fs1 --mock oracle --no-cache --config " +
                                  (dir / "cfg.toml").string() + " --out " +
                                  (dir / "t.jsonl").string());
    CHECK(run.exit_code == 0);
}
