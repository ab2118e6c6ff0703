// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "atomize/dataset.hpp"
#include "atomize/gateway.hpp"
#include "atomize/prompts.hpp"

namespace atomize {

/// One prompt/response within a transcript.
struct StageRecord {
    std::string stage;  // "prompt" for baselines; atomize/manipulate/reconstruct for dnc
    std::optional<std::string> system;
    std::string user;
    std::string raw;
    std::optional<std::string> extracted;
    std::string error;
};

/// Everything recorded for one instance under one strategy.
struct Transcript {
    std::string id;
    std::string strategy;
    std::string target;
    std::vector<StageRecord> stages;
    std::string prediction;
    bool extraction_ok = false;
};

void write_transcripts(const std::filesystem::path& path,
                       const std::vector<Transcript>& transcripts);
std::vector<Transcript> read_transcripts(const std::filesystem::path& path);

struct RunOptions {
    Strategy strategy;
    ModelTarget target;
    int concurrency = 4;
    /// Stages up to and including this one receive oracle upstream inputs
    /// instead of the model's own extracted outputs. 0 disables.
    int oracle_stage = 0;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs every instance, collecting results in parallel (the gateway enforces
/// the in-flight bound) and returning transcripts sorted by instance id.
/// Per-instance gateway failures are recorded, never thrown.
std::vector<Transcript> run_dataset(const std::vector<TaskInstance>& instances,
                                    const TemplateRegistry& registry, Gateway& gateway,
                                    const RunOptions& options);

struct AblationCell {
    int stage = 0;  // 1..3
    int shots = 0;  // 0..3
    std::size_t n = 0;
    std::size_t correct = 0;
    std::size_t errors = 0;  // gateway failures, scored incorrect
};

/// Table of per-stage accuracy with oracle upstream inputs: each stage is
/// rendered with ground-truth priors and scored against its own stage oracle,
/// for every shot count requested.
std::vector<AblationCell> run_stage_ablation(const std::vector<TaskInstance>& instances,
                                             const TemplateRegistry& registry, Gateway& gateway,
                                             const ModelTarget& target,
                                             const std::vector<int>& shot_counts,
                                             int concurrency);

struct SpellingOutcome {
    std::string word;
    std::string predicted;
    bool em = false;
    bool abstained = false;
};

struct LetterCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
    std::size_t abstentions = 0;
};

struct CountingOutcome {
    std::string word;
    std::size_t actual = 0;
    std::optional<long> predicted;  // nullopt = abstention
};

struct DiagnosticReport {
    DiagnosticKind kind = DiagnosticKind::Spelling;
    std::vector<SpellingOutcome> spelling;
    std::array<LetterCounts, 26> retrieval{};  // indexed by letter - 'a'
    std::vector<CountingOutcome> counting;
    std::size_t n = 0;
    std::size_t correct = 0;
    std::size_t abstentions = 0;
};

/// Spelling: per-word exact match against the spaced spelling. Retrieval:
/// every word is probed with all 26 letters and yes/no answers are tallied
/// per letter. Counting: predicted vs actual distinct-character counts.
DiagnosticReport run_diagnostics(const WordList& words, DiagnosticKind kind,
                                 const TemplateRegistry& registry, Gateway& gateway,
                                 const ModelTarget& target, int concurrency);

}  // namespace atomize
