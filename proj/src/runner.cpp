// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "atomize/errors.hpp"
#include "atomize/eval.hpp"
#include "atomize/io.hpp"
#include "atomize/perturb.hpp"

namespace atomize {

namespace {

using nlohmann::json;

/// Runs fn(i) for i in [0, total) on up to `threads` workers.
void parallel_for(std::size_t total, int threads, const std::function<void(std::size_t)>& fn) {
    const int worker_count =
        std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(total, 64))));
    if (worker_count == 1) {
        for (std::size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total) return;
                fn(i);
            }
        });
    }
    for (std::thread& t : workers) t.join();
}

StageRecord record_exchange(std::string stage, const Exchange& exchange) {
    StageRecord record;
    record.stage = std::move(stage);
    record.system = exchange.system;
    record.user = exchange.user;
    record.raw = exchange.raw_text;
    record.error = exchange.error;
    if (exchange.ok) record.extracted = extract_answer(exchange.raw_text);
    return record;
}

Transcript run_instance(const TaskInstance& instance, const TemplateRegistry& registry,
                        Gateway& gateway, const RunOptions& options) {
    Transcript transcript;
    transcript.id = instance.id;
    transcript.strategy = options.strategy.name();
    transcript.target = options.target.id();

    const std::optional<std::string> system = default_system_message();

    if (!options.strategy.is_dnc()) {
        const PromptBundle bundle = render_baseline(instance, options.strategy, registry);
        const Exchange exchange =
            gateway.complete(options.target, bundle.system_message, bundle.user_messages[0]);
        StageRecord record = record_exchange("prompt", exchange);
        transcript.extraction_ok = record.extracted.has_value();
        transcript.prediction = record.extracted.value_or("");
        transcript.stages.push_back(std::move(record));
        return transcript;
    }

    std::optional<std::string> prior;
    for (int stage = 1; stage <= 3; ++stage) {
        std::optional<std::string> input = prior;
        if (stage > 1 && stage <= options.oracle_stage) {
            input = dnc_stage_oracle(instance, stage - 1);
        }
        if (stage > 1 && !input.has_value()) {
            // Upstream extraction failed and no oracle substitute: the chain
            // cannot continue; the instance scores as incorrect.
            StageRecord record;
            record.stage = std::string(kDncStageLabels[static_cast<std::size_t>(stage - 1)]);
            record.error = "missing previous stage output";
            transcript.stages.push_back(std::move(record));
            break;
        }
        const std::string user = render_dnc_stage(instance, stage, input,
                                                  options.strategy.stage_shots[stage - 1],
                                                  registry);
        const Exchange exchange = gateway.complete(options.target, system, user);
        StageRecord record =
            record_exchange(std::string(kDncStageLabels[static_cast<std::size_t>(stage - 1)]),
                            exchange);
        prior = record.extracted;
        transcript.stages.push_back(std::move(record));
        if (stage == 3) {
            transcript.extraction_ok = transcript.stages.back().extracted.has_value();
            transcript.prediction = transcript.stages.back().extracted.value_or("");
        }
    }
    return transcript;
}

}  // namespace

void write_transcripts(const std::filesystem::path& path,
                       const std::vector<Transcript>& transcripts) {
    std::string out;
    for (const Transcript& t : transcripts) {
        json stages = json::array();
        for (const StageRecord& s : t.stages) {
            json stage = {
                {"stage", s.stage},
                {"system", s.system ? json(*s.system) : json(nullptr)},
                {"user", s.user},
                {"raw", s.raw},
                {"extracted", s.extracted ? json(*s.extracted) : json(nullptr)},
                {"error", s.error},
            };
            stages.push_back(std::move(stage));
        }
        const json line = {
            {"id", t.id},
            {"strategy", t.strategy},
            {"target", t.target},
            {"stages", stages},
            {"prediction", t.prediction},
            {"extraction_ok", t.extraction_ok},
        };
        out += line.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<Transcript> read_transcripts(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<Transcript> transcripts;
    transcripts.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        json line;
        try {
            line = json::parse(lines[i]);
        } catch (const json::exception& e) {
            throw parse_error("transcript line " + std::to_string(i + 1) + ": " + e.what());
        }
        Transcript t;
        t.id = line.at("id").get<std::string>();
        t.strategy = line.value("strategy", "");
        t.target = line.value("target", "");
        t.prediction = line.value("prediction", "");
        t.extraction_ok = line.value("extraction_ok", false);
        if (line.contains("stages")) {
            for (const json& stage : line["stages"]) {
                StageRecord record;
                record.stage = stage.value("stage", "");
                if (stage.contains("system") && !stage["system"].is_null()) {
                    record.system = stage["system"].get<std::string>();
                }
                record.user = stage.value("user", "");
                record.raw = stage.value("raw", "");
                if (stage.contains("extracted") && !stage["extracted"].is_null()) {
                    record.extracted = stage["extracted"].get<std::string>();
                }
                record.error = stage.value("error", "");
                t.stages.push_back(std::move(record));
            }
        }
        transcripts.push_back(std::move(t));
    }
    return transcripts;
}

std::vector<Transcript> run_dataset(const std::vector<TaskInstance>& instances,
                                    const TemplateRegistry& registry, Gateway& gateway,
                                    const RunOptions& options) {
    std::vector<Transcript> transcripts(instances.size());
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    parallel_for(instances.size(), options.concurrency, [&](std::size_t i) {
        try {
            transcripts[i] = run_instance(instances[i], registry, gateway, options);
        } catch (const std::exception& e) {
            // A per-instance failure must never take down the run.
            Transcript failed;
            failed.id = instances[i].id;
            failed.strategy = options.strategy.name();
            failed.target = options.target.id();
            StageRecord record;
            record.stage = "error";
            record.error = e.what();
            failed.stages.push_back(std::move(record));
            transcripts[i] = std::move(failed);
        }
        const std::size_t finished = done.fetch_add(1) + 1;
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(finished, instances.size());
        }
    });
    std::sort(transcripts.begin(), transcripts.end(),
              [](const Transcript& a, const Transcript& b) { return a.id < b.id; });
    return transcripts;
}

std::vector<AblationCell> run_stage_ablation(const std::vector<TaskInstance>& instances,
                                             const TemplateRegistry& registry, Gateway& gateway,
                                             const ModelTarget& target,
                                             const std::vector<int>& shot_counts,
                                             int concurrency) {
    std::vector<AblationCell> grid;
    const std::optional<std::string> system = default_system_message();
    for (int stage = 1; stage <= 3; ++stage) {
        for (int shots : shot_counts) {
            AblationCell cell;
            cell.stage = stage;
            cell.shots = shots;
            cell.n = instances.size();
            std::atomic<std::size_t> correct{0};
            std::atomic<std::size_t> errors{0};
            parallel_for(instances.size(), concurrency, [&](std::size_t i) {
                try {
                    const TaskInstance& inst = instances[i];
                    std::optional<std::string> prior;
                    if (stage > 1) prior = dnc_stage_oracle(inst, stage - 1);
                    const std::string user =
                        render_dnc_stage(inst, stage, prior, shots, registry);
                    const Exchange exchange = gateway.complete(target, system, user);
                    if (!exchange.ok) {
                        errors.fetch_add(1);
                        return;
                    }
                    const std::optional<std::string> extracted =
                        extract_answer(exchange.raw_text);
                    if (extracted && exact_match(*extracted, dnc_stage_oracle(inst, stage))) {
                        correct.fetch_add(1);
                    }
                } catch (const std::exception&) {
                    errors.fetch_add(1);
                }
            });
            cell.correct = correct.load();
            cell.errors = errors.load();
            grid.push_back(cell);
        }
    }
    return grid;
}

namespace {

std::optional<bool> parse_yes_no(std::string_view answer) {
    std::string lowered;
    for (char c : answer) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lowered.starts_with("yes")) return true;
    if (lowered.starts_with("no")) return false;
    return std::nullopt;
}

std::optional<long> parse_integer(std::string_view answer) {
    const std::string text(answer);
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str()) return std::nullopt;
    while (*end != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*end))) return std::nullopt;
        ++end;
    }
    return v;
}

}  // namespace

DiagnosticReport run_diagnostics(const WordList& words, DiagnosticKind kind,
                                 const TemplateRegistry& registry, Gateway& gateway,
                                 const ModelTarget& target, int concurrency) {
    DiagnosticReport report;
    report.kind = kind;
    const std::optional<std::string> system = default_system_message();

    if (kind == DiagnosticKind::Retrieval) {
        // One probe per (word, letter) pair, all 26 letters.
        const std::size_t total = words.words.size() * 26;
        std::vector<std::optional<bool>> answers(total);
        parallel_for(total, concurrency, [&](std::size_t i) {
            try {
                const Word& word = words.words[i / 26];
                const char letter = static_cast<char>('a' + i % 26);
                const std::string user = render_diagnostic(kind, word, letter, registry);
                const Exchange exchange = gateway.complete(target, system, user);
                if (!exchange.ok) return;
                const std::optional<std::string> extracted = extract_answer(exchange.raw_text);
                if (!extracted) return;
                answers[i] = parse_yes_no(*extracted);
            } catch (const std::exception&) {
                // Recorded as an abstention.
            }
        });
        for (std::size_t i = 0; i < total; ++i) {
            const Word& word = words.words[i / 26];
            const char letter = static_cast<char>('a' + i % 26);
            LetterCounts& counts = report.retrieval[static_cast<std::size_t>(letter - 'a')];
            const bool present = char_in_word(word, letter);
            report.n += 1;
            if (!answers[i].has_value()) {
                counts.abstentions += 1;
                report.abstentions += 1;
                continue;
            }
            const bool said_yes = *answers[i];
            if (said_yes && present) {
                counts.true_positive += 1;
                report.correct += 1;
            } else if (said_yes && !present) {
                counts.false_positive += 1;
            } else if (!said_yes && !present) {
                counts.true_negative += 1;
                report.correct += 1;
            } else {
                counts.false_negative += 1;
            }
        }
        return report;
    }

    const std::size_t total = words.words.size();
    if (kind == DiagnosticKind::Spelling) {
        report.spelling.resize(total);
    } else {
        report.counting.resize(total);
    }
    parallel_for(total, concurrency, [&](std::size_t i) {
        const Word& word = words.words[i];
        std::optional<std::string> extracted;
        try {
            const std::string user = render_diagnostic(kind, word, 'a', registry);
            const Exchange exchange = gateway.complete(target, system, user);
            if (exchange.ok) extracted = extract_answer(exchange.raw_text);
        } catch (const std::exception&) {
            // Recorded as an abstention.
        }
        if (kind == DiagnosticKind::Spelling) {
            SpellingOutcome outcome;
            outcome.word = word.text();
            outcome.predicted = extracted.value_or("");
            outcome.abstained = !extracted.has_value();
            outcome.em = extracted.has_value() && exact_match(*extracted, atomize(word));
            report.spelling[i] = std::move(outcome);
        } else {
            CountingOutcome outcome;
            outcome.word = word.text();
            outcome.actual = count_distinct_chars(word);
            if (extracted) outcome.predicted = parse_integer(*extracted);
            report.counting[i] = std::move(outcome);
        }
    });
    report.n = total;
    for (const SpellingOutcome& outcome : report.spelling) {
        if (outcome.em) report.correct += 1;
        if (outcome.abstained) report.abstentions += 1;
    }
    for (const CountingOutcome& outcome : report.counting) {
        if (!outcome.predicted.has_value()) {
            report.abstentions += 1;
        } else if (static_cast<std::size_t>(*outcome.predicted) == outcome.actual) {
            report.correct += 1;
        }
    }
    return report;
}

}  // namespace atomize
