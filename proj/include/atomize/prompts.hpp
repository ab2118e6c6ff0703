// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atomize/dataset.hpp"

namespace atomize {

enum class StrategyKind { FewShot1, FewShot4, CoT, DivideAndConquer };

/// A prompting method. `stage_shots` (0..3 worked examples per stage) applies
/// to the divide-and-conquer chain only.
struct Strategy {
    StrategyKind kind = StrategyKind::FewShot1;
    std::array<int, 3> stage_shots{0, 0, 0};

    static Strategy parse(std::string_view name);  // fs1 | fs4 | cot | dnc
    std::string name() const;
    bool is_dnc() const { return kind == StrategyKind::DivideAndConquer; }
};

/// Rendered prompt material for one instance x strategy. Baselines carry one
/// user message; the divide-and-conquer bundle carries three stage slots in
/// which stages 2 and 3 still contain the {prior} placeholder, to be filled
/// with the previous stage's extracted output.
struct PromptBundle {
    std::optional<std::string> system_message;
    std::vector<std::string> user_messages;
    std::vector<std::string> stage_labels;
};

inline constexpr std::array<std::string_view, 3> kDncStageLabels = {"atomize", "manipulate",
                                                                    "reconstruct"};

/// Prompt texts by name. The compiled-in defaults are authoritative; a
/// directory of <name>.txt files can override any of them (one trailing
/// newline, if present, is stripped on load).
class TemplateRegistry {
public:
    static TemplateRegistry builtin();
    static TemplateRegistry load_dir(const std::filesystem::path& dir);

    const std::string& get(std::string_view name) const;
    static const std::vector<std::string>& names();

private:
    std::map<std::string, std::string, std::less<>> templates_;
};

/// Replaces every "{key}" with vars.at(key); unknown placeholders are left
/// untouched.
std::string substitute_placeholders(std::string_view tpl,
                                    const std::map<std::string, std::string>& vars);

const std::string& default_system_message();

/// Appendix-style single-message prompt for fs1/fs4/cot.
PromptBundle render_baseline(const TaskInstance& instance, const Strategy& strategy,
                             const TemplateRegistry& registry);

/// Divide-and-conquer bundle with unresolved {prior} slots in stages 2 and 3.
PromptBundle render_dnc_bundle(const TaskInstance& instance, const Strategy& strategy,
                               const TemplateRegistry& registry);

/// One divide-and-conquer stage prompt (stage in 1..3). Stages 2 and 3 need
/// the previous stage's extracted output; `shots` in 0..3 prepends that many
/// worked examples.
std::string render_dnc_stage(const TaskInstance& instance, int stage,
                             const std::optional<std::string>& prior_output, int shots,
                             const TemplateRegistry& registry);

/// Ground truth for one stage's output: 1 -> the atomized word, 2 -> the
/// modified sequence still spaced, 3 -> the final expected word.
std::string dnc_stage_oracle(const TaskInstance& instance, int stage);

enum class DiagnosticKind { Spelling, Retrieval, Counting };
DiagnosticKind parse_diagnostic(std::string_view name);
std::string_view diagnostic_name(DiagnosticKind kind);

std::string render_diagnostic(DiagnosticKind kind, const Word& word, char probe_letter,
                              const TemplateRegistry& registry);

/// Answer extraction: takes the remainder of the line after the LAST
/// "Answer:" marker (case-insensitive); without a marker, the last non-empty
/// line. Strips surrounding whitespace, one trailing period, and a matching
/// surrounding quote pair. Returns nullopt for empty/blank output.
std::optional<std::string> extract_answer(std::string_view raw);

/// What a rendered prompt asked for, recovered from its text. This is the
/// grammar the deterministic mock models use to answer.
struct ParsedPrompt {
    enum class Kind {
        BaselineDeletion,
        BaselineInsertion,
        BaselineSubstitution,
        Stage1Atomize,
        Stage2Deletion,
        Stage2Insertion,
        Stage2Substitution,
        Stage3Join,
        DiagSpelling,
        DiagRetrieval,
        DiagCounting,
    };
    Kind kind;
    std::string sequence;  // the word (baselines, stage 1, diagnostics) or spaced prior
    char target = 0;
    char replacement = 0;
};

std::optional<ParsedPrompt> parse_prompt(std::string_view user_message);

}  // namespace atomize
