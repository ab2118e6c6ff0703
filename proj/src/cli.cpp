// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atomize/config.hpp"
#include "atomize/dataset.hpp"
#include "atomize/errors.hpp"
#include "atomize/eval.hpp"
#include "atomize/gateway.hpp"
#include "atomize/prompts.hpp"
#include "atomize/report.hpp"
#include "atomize/runner.hpp"

namespace atomize {

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::array<int, 3> parse_stage_shots(const std::string& csv) {
    std::array<int, 3> shots{0, 0, 0};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t comma = csv.find(',', pos);
        const std::string part =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        char* end = nullptr;
        const long v = std::strtol(part.c_str(), &end, 10);
        if (end == part.c_str() || *end != '\0' || v < 0 || v > 3) {
            throw config_error("stage shots must be three integers in [0,3]: " + csv);
        }
        shots[static_cast<std::size_t>(i)] = static_cast<int>(v);
        if (comma == std::string::npos) {
            if (i != 2) throw config_error("stage shots need three comma-separated values");
            break;
        }
        pos = comma + 1;
    }
    return shots;
}

std::vector<int> parse_shot_list(const std::string& csv) {
    std::vector<int> shots;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string part =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        char* end = nullptr;
        const long v = std::strtol(part.c_str(), &end, 10);
        if (end == part.c_str() || *end != '\0' || v < 0 || v > 3) {
            throw config_error("shot counts must be integers in [0,3]: " + csv);
        }
        shots.push_back(static_cast<int>(v));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (shots.empty()) throw config_error("no shot counts given");
    return shots;
}

/// Options shared by the commands that talk to a model.
struct TargetOptions {
    std::string mock_spec;
    std::string model;
    std::uint64_t mock_seed = 0;
    std::string cache_dir;  // resolved later through Settings
    bool no_cache = false;
    int concurrency = 0;  // 0 = take from settings
    std::string templates_dir;
    std::string config_file;
    // Live tuning; negative sentinel = take from settings.
    double temperature = -1.0;
    double top_p = -1.0;
    int max_tokens = -1;
    double timeout_s = -1.0;
    std::string endpoint;
};

void add_target_options(CLI::App* cmd, TargetOptions& opts) {
    cmd->add_option("--mock", opts.mock_spec,
                    "deterministic mock behavior (oracle, autocorrect[:p], first_only[:p], "
                    "length_fail[:N], garbage)");
    cmd->add_option("--model", opts.model, "live model name for an OpenAI-compatible endpoint");
    cmd->add_option("--mock-seed", opts.mock_seed, "seed for probabilistic mock behaviors");
    cmd->add_option("--endpoint", opts.endpoint, "endpoint base URL (or ATOMIZE_BENCH_ENDPOINT)");
    cmd->add_option("--cache", opts.cache_dir, "response cache directory (or ATOMIZE_BENCH_CACHE)");
    cmd->add_flag("--no-cache", opts.no_cache, "disable the response cache");
    cmd->add_option("--concurrency", opts.concurrency, "maximum in-flight requests")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--templates", opts.templates_dir, "directory of prompt template overrides");
    cmd->add_option("--config", opts.config_file, "TOML settings file");
    cmd->add_option("--temperature", opts.temperature, "sampling temperature (live)");
    cmd->add_option("--top-p", opts.top_p, "nucleus sampling mass (live)");
    cmd->add_option("--max-tokens", opts.max_tokens, "completion token budget (live)");
    cmd->add_option("--timeout", opts.timeout_s, "request timeout in seconds (live)");
}

struct ResolvedTarget {
    Settings settings;
    ModelTarget target;
    TemplateRegistry registry;
    fs::path cache_dir;  // empty = disabled
    int concurrency = 4;
};

ResolvedTarget resolve_target(const TargetOptions& opts) {
    ResolvedTarget resolved{
        load_settings(opts.config_file.empty()
                          ? std::nullopt
                          : std::optional<fs::path>(opts.config_file)),
        ModelTarget{},
        TemplateRegistry::builtin(),
        {},
        4,
    };
    Settings& settings = resolved.settings;
    if (!opts.endpoint.empty()) settings.endpoint = opts.endpoint;
    if (!opts.cache_dir.empty()) settings.cache_dir = opts.cache_dir;
    if (opts.concurrency > 0) settings.concurrency = opts.concurrency;
    if (opts.temperature >= 0) settings.temperature = opts.temperature;
    if (opts.top_p >= 0) settings.top_p = opts.top_p;
    if (opts.max_tokens >= 0) settings.max_tokens = opts.max_tokens;
    if (opts.timeout_s >= 0) settings.timeout_s = opts.timeout_s;
    if (!opts.model.empty()) settings.model = opts.model;

    const bool mock = !opts.mock_spec.empty();
    const bool live = !settings.model.empty();
    if (mock == live) {
        throw config_error("exactly one of --mock and --model is required");
    }
    if (mock) {
        resolved.target = ModelTarget::make_mock(opts.mock_spec, opts.mock_seed);
    } else {
        const char* key = std::getenv("ATOMIZE_BENCH_API_KEY");
        if (key == nullptr || *key == '\0') {
            throw config_error("live runs need the ATOMIZE_BENCH_API_KEY environment variable");
        }
        LiveConfig live_config;
        live_config.endpoint = settings.endpoint;
        live_config.model = settings.model;
        live_config.temperature = settings.temperature;
        live_config.top_p = settings.top_p;
        live_config.max_tokens = settings.max_tokens;
        live_config.timeout_s = settings.timeout_s;
        resolved.target = ModelTarget::make_live(std::move(live_config));
    }

    if (!opts.templates_dir.empty()) {
        resolved.registry = TemplateRegistry::load_dir(opts.templates_dir);
    }
    if (!opts.no_cache) resolved.cache_dir = settings.cache_dir;
    resolved.concurrency = settings.concurrency;
    return resolved;
}

WordList load_words_or_builtin(const std::string& words_path, std::size_t limit) {
    WordList list =
        words_path.empty() ? builtin_word_list(limit) : load_word_list(words_path, limit);
    for (const std::string& warning : list.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (list.words.empty()) throw config_error("word list is empty after normalization");
    return list;
}

void print_gateway_stats(const Gateway& gateway) {
    const GatewayStats stats = gateway.stats();
    std::cerr << "gateway: live=" << stats.live_calls << " mock=" << stats.mock_calls
              << " cache_hits=" << stats.cache_hits << " cache_misses=" << stats.cache_misses
              << " retries=" << stats.retries << " errors=" << stats.errors << "\n";
}

int cmd_dataset_gen(const std::string& words_path, const std::string& task_name_str,
                    std::size_t limit, std::uint64_t seed, const std::string& out) {
    const TaskKind task = parse_task(task_name_str);
    const WordList list = load_words_or_builtin(words_path, limit);
    const std::vector<TaskInstance> instances = generate_instances(list, task, seed);
    write_dataset(out, instances);
    std::cout << "wrote " << instances.size() << " instances (task=" << task_name(task)
              << ", seed=" << seed << ", words=" << list.source << ") to " << out << "\n";
    return 0;
}

int cmd_run(const std::string& dataset_path, const std::string& strategy_name,
            const std::string& stage_shots_csv, int oracle_stage, const std::string& out,
            std::size_t progress_every, const TargetOptions& target_opts) {
    Strategy strategy = Strategy::parse(strategy_name);
    if (strategy.is_dnc()) strategy.stage_shots = parse_stage_shots(stage_shots_csv);
    if (oracle_stage != 0 && !strategy.is_dnc()) {
        throw config_error("--oracle-stage applies only to the dnc strategy");
    }

    const ResolvedTarget resolved = resolve_target(target_opts);
    const std::vector<TaskInstance> instances = read_dataset(dataset_path);
    if (instances.empty()) throw config_error("dataset is empty: " + dataset_path);

    Gateway gateway({.cache_dir = resolved.cache_dir, .concurrency = resolved.concurrency});

    RunOptions options;
    options.strategy = strategy;
    options.target = resolved.target;
    options.concurrency = resolved.concurrency;
    options.oracle_stage = oracle_stage;
    if (progress_every > 0) {
        options.progress = [progress_every](std::size_t done, std::size_t total) {
            if (done % progress_every == 0 || done == total) {
                std::cerr << "progress: " << done << "/" << total << "\n";
            }
        };
    }

    const std::vector<Transcript> transcripts =
        run_dataset(instances, resolved.registry, gateway, options);
    write_transcripts(out, transcripts);

    std::size_t extraction_failures = 0;
    for (const Transcript& t : transcripts) {
        if (!t.extraction_ok) ++extraction_failures;
    }
    print_gateway_stats(gateway);
    std::cout << "wrote " << transcripts.size() << " transcripts (strategy=" << strategy.name()
              << ", target=" << resolved.target.id() << ", extraction_failures="
              << extraction_failures << ") to " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& dataset_path, const std::string& transcripts_path,
             const std::string& out_dir, bool strict_case_flag, bool svg,
             const std::string& config_file) {
    Settings settings = load_settings(
        config_file.empty() ? std::nullopt : std::optional<fs::path>(config_file));
    const bool strict_case = strict_case_flag || settings.strict_case;

    const std::vector<TaskInstance> instances = read_dataset(dataset_path);
    const std::vector<Transcript> transcripts = read_transcripts(transcripts_path);
    if (transcripts.empty()) throw join_error("no records", {});

    std::vector<std::pair<std::string, std::string>> predictions;
    predictions.reserve(transcripts.size());
    for (const Transcript& t : transcripts) predictions.emplace_back(t.id, t.prediction);

    const std::unordered_set<std::string> dictionary = dictionary_from_instances(instances);
    const std::vector<EvalRecord> records =
        score_predictions(instances, predictions, &dictionary, strict_case);

    EvalReport report = aggregate(records, instances);
    report.strategy = transcripts.front().strategy;
    report.target = transcripts.front().target;
    report.dataset = dataset_path;
    report.strict_case = strict_case;
    report.timestamp = utc_timestamp();

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_report_json(dir / "report.json", report);
    write_records_jsonl(dir / "records.jsonl", records);
    write_table_csv(dir / "table.csv", {table_row_from_report(report)});
    write_lengths_csv(dir / "lengths.csv", length_rows_from_report(report));
    if (svg) {
        write_lengths_svg(dir / "lengths.svg", {length_series_from_report(report)});
        write_error_histogram_svg(dir / "errors.svg", report);
    }

    std::cout << "evaluated " << report.overall.n << " records: accuracy "
              << format_accuracy(report.overall.value()) << " (" << report.overall.correct << "/"
              << report.overall.n << "), reports in " << out_dir << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir, bool svg) {
    std::vector<TableRow> rows;
    std::vector<LengthRow> length_rows;
    std::vector<LengthSeries> series;
    for (const std::string& input : inputs) {
        const EvalReport report = read_report_json(input);
        rows.push_back(table_row_from_report(report));
        const std::vector<LengthRow> more = length_rows_from_report(report);
        length_rows.insert(length_rows.end(), more.begin(), more.end());
        series.push_back(length_series_from_report(report));
    }
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_table_csv(dir / "table.csv", rows);
    write_lengths_csv(dir / "lengths.csv", length_rows);
    if (svg) write_lengths_svg(dir / "lengths.svg", series);
    std::cout << "merged " << inputs.size() << " reports into " << out_dir << "\n";
    return 0;
}

int cmd_ablate(const std::string& dataset_path, const std::string& shots_csv,
               const std::string& out_dir, const TargetOptions& target_opts) {
    const std::vector<int> shots = parse_shot_list(shots_csv);
    const ResolvedTarget resolved = resolve_target(target_opts);
    const std::vector<TaskInstance> instances = read_dataset(dataset_path);
    if (instances.empty()) throw config_error("dataset is empty: " + dataset_path);

    Gateway gateway({.cache_dir = resolved.cache_dir, .concurrency = resolved.concurrency});
    const std::vector<AblationCell> cells = run_stage_ablation(
        instances, resolved.registry, gateway, resolved.target, shots, resolved.concurrency);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_ablation_csv(dir / "ablation.csv", cells);

    static const char* kStageNames[] = {"I", "II", "III"};
    std::cout << "stage";
    for (int s : shots) std::cout << "\t" << s << "-shot";
    std::cout << "\n";
    for (int stage = 1; stage <= 3; ++stage) {
        std::cout << kStageNames[stage - 1];
        for (const AblationCell& cell : cells) {
            if (cell.stage != stage) continue;
            std::cout << "\t"
                      << format_accuracy(cell.n > 0 ? static_cast<double>(cell.correct) /
                                                          static_cast<double>(cell.n)
                                                    : 0.0);
        }
        std::cout << "\n";
    }
    print_gateway_stats(gateway);
    return 0;
}

int cmd_diagnose(const std::string& kind_name, const std::string& words_path, std::size_t limit,
                 const std::string& out_dir, const TargetOptions& target_opts) {
    const DiagnosticKind kind = parse_diagnostic(kind_name);
    const ResolvedTarget resolved = resolve_target(target_opts);
    const WordList words = load_words_or_builtin(words_path, limit);

    Gateway gateway({.cache_dir = resolved.cache_dir, .concurrency = resolved.concurrency});
    const DiagnosticReport report = run_diagnostics(words, kind, resolved.registry, gateway,
                                                    resolved.target, resolved.concurrency);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    switch (kind) {
        case DiagnosticKind::Spelling: write_spelling_csv(dir / "spelling.csv", report); break;
        case DiagnosticKind::Retrieval: write_retrieval_csv(dir / "retrieval.csv", report); break;
        case DiagnosticKind::Counting: write_counting_csv(dir / "counting.csv", report); break;
    }
    print_gateway_stats(gateway);
    std::cout << "diagnostic " << diagnostic_name(kind) << ": n=" << report.n
              << " correct=" << report.correct << " abstentions=" << report.abstentions
              << " accuracy="
              << format_accuracy(report.n > 0 ? static_cast<double>(report.correct) /
                                                    static_cast<double>(report.n)
                                              : 0.0)
              << ", files in " << out_dir << "\n";
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Character-level manipulation benchmark for chat models"};
    app.require_subcommand(1);

    // dataset gen
    CLI::App* dataset_cmd = app.add_subcommand("dataset", "dataset operations");
    dataset_cmd->require_subcommand(1);
    CLI::App* gen_cmd = dataset_cmd->add_subcommand("gen", "generate a benchmark dataset");
    std::string gen_words, gen_task, gen_out;
    std::size_t gen_limit = 1000;
    std::uint64_t gen_seed = 0;
    gen_cmd->add_option("--words", gen_words,
                        "frequency-ranked word list file (default: built-in 50-word list)");
    gen_cmd->add_option("--task", gen_task, "deletion | insertion | substitution")->required();
    gen_cmd->add_option("--limit", gen_limit, "number of words to keep");
    gen_cmd->add_option("--seed", gen_seed, "generation seed");
    gen_cmd->add_option("--out", gen_out, "output JSONL path")->required();

    // run
    CLI::App* run_cmd = app.add_subcommand("run", "run a strategy over a dataset");
    std::string run_dataset_path, run_strategy, run_out, run_stage_shots = "0,0,0";
    int run_oracle_stage = 0;
    std::size_t run_progress_every = 200;
    TargetOptions run_target;
    run_cmd->add_option("--dataset", run_dataset_path, "dataset JSONL")->required();
    run_cmd->add_option("--strategy", run_strategy, "fs1 | fs4 | cot | dnc")->required();
    run_cmd->add_option("--stage-shots", run_stage_shots,
                        "dnc worked examples per stage, e.g. 1,1,1");
    run_cmd->add_option("--oracle-stage", run_oracle_stage,
                        "feed oracle outputs to stages up to N (dnc debugging)")
        ->check(CLI::Range(0, 3));
    run_cmd->add_option("--out", run_out, "transcript JSONL path")->required();
    run_cmd->add_option("--progress-every", run_progress_every, "progress line interval");
    add_target_options(run_cmd, run_target);

    // eval
    CLI::App* eval_cmd = app.add_subcommand("eval", "score transcripts and emit reports");
    std::string eval_dataset, eval_transcripts, eval_out_dir, eval_config;
    bool eval_strict = false, eval_svg = false;
    eval_cmd->add_option("--dataset", eval_dataset, "dataset JSONL")->required();
    eval_cmd->add_option("--transcripts", eval_transcripts, "transcript JSONL")->required();
    eval_cmd->add_option("--out-dir", eval_out_dir, "report output directory")->required();
    eval_cmd->add_flag("--strict-case", eval_strict, "byte-exact matching, no case folding");
    eval_cmd->add_flag("--svg", eval_svg, "emit SVG charts");
    eval_cmd->add_option("--config", eval_config, "TOML settings file");

    // report
    CLI::App* report_cmd = app.add_subcommand("report", "merge report.json files into tables");
    std::vector<std::string> report_inputs;
    std::string report_out_dir;
    bool report_svg = false;
    report_cmd->add_option("--in", report_inputs, "report.json files")->required();
    report_cmd->add_option("--out-dir", report_out_dir, "output directory")->required();
    report_cmd->add_flag("--svg", report_svg, "emit SVG charts");

    // ablate
    CLI::App* ablate_cmd = app.add_subcommand("ablate", "per-stage accuracy grid");
    std::string ablate_dataset, ablate_shots = "0,1,2,3", ablate_out_dir;
    TargetOptions ablate_target;
    ablate_cmd->add_option("--dataset", ablate_dataset, "dataset JSONL")->required();
    ablate_cmd->add_option("--shots", ablate_shots, "comma-separated shot counts");
    ablate_cmd->add_option("--out-dir", ablate_out_dir, "output directory")->required();
    add_target_options(ablate_cmd, ablate_target);

    // diagnose
    CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "spelling/retrieval/counting probes");
    std::string diag_kind, diag_words, diag_out_dir;
    std::size_t diag_limit = 50;
    TargetOptions diag_target;
    diagnose_cmd->add_option("kind", diag_kind, "spelling | retrieval | counting")->required();
    diagnose_cmd->add_option("--words", diag_words, "word list file (default: built-in list)");
    diagnose_cmd->add_option("--limit", diag_limit, "number of words to probe");
    diagnose_cmd->add_option("--out-dir", diag_out_dir, "output directory")->required();
    add_target_options(diagnose_cmd, diag_target);

    CLI::App* version_cmd = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(dataset_cmd)) {
            return cmd_dataset_gen(gen_words, gen_task, gen_limit, gen_seed, gen_out);
        }
        if (app.got_subcommand(run_cmd)) {
            return cmd_run(run_dataset_path, run_strategy, run_stage_shots, run_oracle_stage,
                           run_out, run_progress_every, run_target);
        }
        if (app.got_subcommand(eval_cmd)) {
            return cmd_eval(eval_dataset, eval_transcripts, eval_out_dir, eval_strict, eval_svg,
                            eval_config);
        }
        if (app.got_subcommand(report_cmd)) {
            return cmd_report(report_inputs, report_out_dir, report_svg);
        }
        if (app.got_subcommand(ablate_cmd)) {
            return cmd_ablate(ablate_dataset, ablate_shots, ablate_out_dir, ablate_target);
        }
        if (app.got_subcommand(diagnose_cmd)) {
            return cmd_diagnose(diag_kind, diag_words, diag_limit, diag_out_dir, diag_target);
        }
        if (app.got_subcommand(version_cmd)) {
            std::cout << "atomize-bench " << kVersion << "\n";
            return 0;
        }
    } catch (const join_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace atomize
