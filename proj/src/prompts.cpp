// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "atomize/errors.hpp"
#include "atomize/io.hpp"
#include "atomize/perturb.hpp"

namespace atomize {

namespace {

// Baseline templates. These are deployed verbatim (including the original
// phrasing quirks); the golden-file tests pin every byte, so do not "fix"
// anything here without updating those.

constexpr const char* kFs1Deletion =
    "Delete every instance of a specified letter in a given word, based on the following "
    "examples:\n\ne.g.: Delete every instance of \"a\" in \"alphabet\". Answer: "
    "\"lphbet\"\n\nQuestion: Delete every instance of \"{target}\" in \"{word}\".";

constexpr const char* kFs1Insertion =
    "Add the specified letter after every instance of the second specified letter in a given "
    "word, based on the following examples:\n\ne.g.: Add an \"e\" after every \"a\" in "
    "\"alphabet\". Answer: \"aelphaebet\"\n\nQuestion: Add an \"{replacement}\" after every "
    "\"{target}\" in \"{word}\".";

constexpr const char* kFs1Substitution =
    "Substitute the first specified letter with the second specified letter in a given word, "
    "based on the following examples:\n\ne.g.: Substitute \"a\" with \"b\" in \"alphabet\". "
    "Answer: \"blphbbet\"\n\nQuestion: Substitute \"{target}\" with \"{replacement}\" in "
    "\"{word}\".";

constexpr const char* kFs4Deletion =
    "Delete every instance of a specified letter in a given word, based on the following "
    "examples:\n\n1. Delete every instance of \"a\" in \"alphabet\". Answer: \"lphbet\"\n2. "
    "Delete every instance of \"l\" in \"hello\". Answer: \"heo\"\n3. Delete every instance of "
    "\"z\" in \"zebra\". Answer: \"ebra\"\n4. Delete every instance of \"u\" in \"tongue\". "
    "Answer: \"tonge\"\n\nQuestion: Delete every instance of \"{target}\" in \"{word}\".";

constexpr const char* kFs4Insertion =
    "Add the specified letter after every instance of the second specified letter in a given "
    "word, based on the following examples:\n\n1. Add an \"e\" after every \"a\" in "
    "\"alphabet\". Answer: \"aelphaebet\"\n2. Add an \"l\" after every \"l\" in \"hello\". "
    "Answer: \"hellllo\"\n3. Add an \"t\" after every \"z\" in \"zebra\". Answer: "
    "\"ztebra\"\n4. Add an \"f\" after every \"u\" in \"tongue\". Answer: "
    "\"tongufe\"\n\nQuestion: Add an \"{replacement}\" after every \"{target}\" in \"{word}\".";

constexpr const char* kFs4Substitution =
    "Substitute the first specified letter with the second specified letter in a given word, "
    "based on the following examples:\n\n1. Substitute \"a\" with \"b\" in \"alphabet\". "
    "Answer: \"blphbbet\"\n2. Substitute \"h\" with \"e\" in \"hello\". Answer: \"eello\"\n3. "
    "Substitute \"z\" with \"a\" in \"zebra\". Answer: \"aebra\"\n4. Substitute \"u\" with "
    "\"e\" in \"tongue\". Answer: \"tongee\"\n\nQuestion: Substitute \"{target}\" with "
    "\"{replacement}\" in \"{word}\".";

constexpr const char* kCotDeletion =
    "Delete every instance of \"{target}\" in \"{word}\". Show you reasoning process step by "
    "step. Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kCotInsertion =
    "Add an \"{replacement}\" after every \"{target}\" in \"{word}\". Show you reasoning "
    "process step by step. Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kCotSubstitution =
    "Substitute \"{target}\" with \"{replacement}\" in \"{word}\". Show you reasoning process "
    "step by step. Please provide the final answer at the end with \"Answer:\".";

// Three-stage chain templates. {examples} expands to an optional worked-example
// block; {prior} receives the previous stage's extracted output.

constexpr const char* kDncStage1 =
    "Rewrite a given word as its individual characters separated by single "
    "spaces.{examples}\n\nQuestion: Rewrite \"{word}\" as characters separated by single "
    "spaces. Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kDncStage2Deletion =
    "Delete every instance of a specified letter in a sequence of space-separated characters, "
    "keeping the remaining characters separated by single spaces.{examples}\n\nQuestion: "
    "Delete every instance of \"{target}\" in \"{prior}\". Please provide the final answer at "
    "the end with \"Answer:\".";

constexpr const char* kDncStage2Insertion =
    "Add the specified letter after every instance of the second specified letter in a "
    "sequence of space-separated characters, keeping all characters separated by single "
    "spaces.{examples}\n\nQuestion: Add an \"{replacement}\" after every \"{target}\" in "
    "\"{prior}\". Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kDncStage2Substitution =
    "Substitute the first specified letter with the second specified letter in a sequence of "
    "space-separated characters, keeping all characters separated by single "
    "spaces.{examples}\n\nQuestion: Substitute \"{target}\" with \"{replacement}\" in "
    "\"{prior}\". Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kDncStage3 =
    "Join a sequence of space-separated characters into a single word without adding, "
    "removing, or changing any characters.{examples}\n\nQuestion: Join \"{prior}\" into a "
    "single word. Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kDiagSpelling =
    "Spell the word \"{word}\" as its individual characters separated by single spaces. "
    "Please provide the final answer at the end with \"Answer:\".";

constexpr const char* kDiagRetrieval =
    "Is the letter \"{target}\" in \"{word}\"? Please answer with Yes or No, and provide the "
    "final answer at the end with \"Answer:\".";

constexpr const char* kDiagCounting =
    "How many distinct characters are in the word \"{word}\"? Please provide the final answer "
    "at the end with \"Answer:\".";

const std::map<std::string, const char*, std::less<>>& builtin_texts() {
    static const std::map<std::string, const char*, std::less<>> kTexts = {
        {"fs1_deletion", kFs1Deletion},
        {"fs1_insertion", kFs1Insertion},
        {"fs1_substitution", kFs1Substitution},
        {"fs4_deletion", kFs4Deletion},
        {"fs4_insertion", kFs4Insertion},
        {"fs4_substitution", kFs4Substitution},
        {"cot_deletion", kCotDeletion},
        {"cot_insertion", kCotInsertion},
        {"cot_substitution", kCotSubstitution},
        {"dnc_stage1", kDncStage1},
        {"dnc_stage2_deletion", kDncStage2Deletion},
        {"dnc_stage2_insertion", kDncStage2Insertion},
        {"dnc_stage2_substitution", kDncStage2Substitution},
        {"dnc_stage3", kDncStage3},
        {"diag_spelling", kDiagSpelling},
        {"diag_retrieval", kDiagRetrieval},
        {"diag_counting", kDiagCounting},
    };
    return kTexts;
}

// Worked examples for the stage prompts, reusing the baseline example words.
struct StageShot {
    const char* question;
    const char* answer;
};

constexpr StageShot kStage1Shots[3] = {
    {"Rewrite \"alphabet\" as characters separated by single spaces.", "a l p h a b e t"},
    {"Rewrite \"zebra\" as characters separated by single spaces.", "z e b r a"},
    {"Rewrite \"tongue\" as characters separated by single spaces.", "t o n g u e"},
};

constexpr StageShot kStage2DeletionShots[3] = {
    {"Delete every instance of \"a\" in \"a l p h a b e t\".", "l p h b e t"},
    {"Delete every instance of \"l\" in \"h e l l o\".", "h e o"},
    {"Delete every instance of \"z\" in \"z e b r a\".", "e b r a"},
};

constexpr StageShot kStage2InsertionShots[3] = {
    {"Add an \"e\" after every \"a\" in \"a l p h a b e t\".", "a e l p h a e b e t"},
    {"Add an \"l\" after every \"l\" in \"h e l l o\".", "h e l l l l o"},
    {"Add an \"t\" after every \"z\" in \"z e b r a\".", "z t e b r a"},
};

constexpr StageShot kStage2SubstitutionShots[3] = {
    {"Substitute \"a\" with \"b\" in \"a l p h a b e t\".", "b l p h b b e t"},
    {"Substitute \"h\" with \"e\" in \"h e l l o\".", "e e l l o"},
    {"Substitute \"u\" with \"e\" in \"t o n g u e\".", "t o n g e e"},
};

constexpr StageShot kStage3Shots[3] = {
    {"Join \"l p h b e t\" into a single word.", "lphbet"},
    {"Join \"h e o\" into a single word.", "heo"},
    {"Join \"e b r a\" into a single word.", "ebra"},
};

std::string examples_block(const StageShot* shots, int count) {
    if (count <= 0) return {};
    std::string block = " Examples:\n";
    for (int i = 0; i < count; ++i) {
        block += '\n';
        block += std::to_string(i + 1);
        block += ". ";
        block += shots[i].question;
        block += " Answer: \"";
        block += shots[i].answer;
        block += '"';
    }
    return block;
}

const char* baseline_template_name(TaskKind task, StrategyKind strategy) {
    switch (strategy) {
        case StrategyKind::FewShot1:
            return task == TaskKind::Deletion    ? "fs1_deletion"
                   : task == TaskKind::Insertion ? "fs1_insertion"
                                                 : "fs1_substitution";
        case StrategyKind::FewShot4:
            return task == TaskKind::Deletion    ? "fs4_deletion"
                   : task == TaskKind::Insertion ? "fs4_insertion"
                                                 : "fs4_substitution";
        case StrategyKind::CoT:
            return task == TaskKind::Deletion    ? "cot_deletion"
                   : task == TaskKind::Insertion ? "cot_insertion"
                                                 : "cot_substitution";
        case StrategyKind::DivideAndConquer:
            break;
    }
    throw config_error("no baseline template for the divide-and-conquer strategy");
}

std::map<std::string, std::string> instance_vars(const TaskInstance& instance) {
    std::map<std::string, std::string> vars = {
        {"word", instance.word.text()},
        {"target", std::string(1, instance.op.target)},
    };
    if (instance.op.replacement) vars["replacement"] = std::string(1, *instance.op.replacement);
    return vars;
}

std::string strip_extracted(std::string_view s) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    s = trim(s);
    if (!s.empty() && s.back() == '.') {
        s.remove_suffix(1);
        s = trim(s);
    }
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        s.remove_prefix(1);
        s.remove_suffix(1);
        s = trim(s);
    }
    return std::string(s);
}

std::vector<std::string> quoted_args(std::string_view line) {
    std::vector<std::string> args;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = line.find('"', pos);
        if (open == std::string_view::npos) break;
        const std::size_t close = line.find('"', open + 1);
        if (close == std::string_view::npos) break;
        args.emplace_back(line.substr(open + 1, close - open - 1));
        pos = close + 1;
    }
    return args;
}

}  // namespace

Strategy Strategy::parse(std::string_view name) {
    if (name == "fs1") return Strategy{StrategyKind::FewShot1};
    if (name == "fs4") return Strategy{StrategyKind::FewShot4};
    if (name == "cot") return Strategy{StrategyKind::CoT};
    if (name == "dnc") return Strategy{StrategyKind::DivideAndConquer};
    throw config_error("unknown strategy: " + std::string(name) +
                       " (expected fs1, fs4, cot, or dnc)");
}

std::string Strategy::name() const {
    switch (kind) {
        case StrategyKind::FewShot1: return "fs1";
        case StrategyKind::FewShot4: return "fs4";
        case StrategyKind::CoT: return "cot";
        case StrategyKind::DivideAndConquer: return "dnc";
    }
    return "unknown";
}

TemplateRegistry TemplateRegistry::builtin() {
    TemplateRegistry registry;
    for (const auto& [name, text] : builtin_texts()) registry.templates_[name] = text;
    return registry;
}

TemplateRegistry TemplateRegistry::load_dir(const std::filesystem::path& dir) {
    TemplateRegistry registry = builtin();
    for (const std::string& name : names()) {
        const std::filesystem::path file = dir / (name + ".txt");
        if (!std::filesystem::exists(file)) continue;
        std::string text = read_file(file);
        if (!text.empty() && text.back() == '\n') text.pop_back();
        registry.templates_[name] = std::move(text);
    }
    return registry;
}

const std::string& TemplateRegistry::get(std::string_view name) const {
    const auto it = templates_.find(name);
    if (it == templates_.end()) throw config_error("unknown template: " + std::string(name));
    return it->second;
}

const std::vector<std::string>& TemplateRegistry::names() {
    static const std::vector<std::string> kNames = [] {
        std::vector<std::string> names;
        for (const auto& [name, text] : builtin_texts()) names.push_back(name);
        return names;
    }();
    return kNames;
}

std::string substitute_placeholders(std::string_view tpl,
                                    const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tpl.size());
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        const std::size_t open = tpl.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(tpl.substr(pos));
            break;
        }
        const std::size_t close = tpl.find('}', open + 1);
        if (close == std::string_view::npos) {
            out.append(tpl.substr(pos));
            break;
        }
        out.append(tpl.substr(pos, open - pos));
        const std::string key(tpl.substr(open + 1, close - open - 1));
        const auto it = vars.find(key);
        if (it != vars.end()) {
            out.append(it->second);
        } else {
            out.append(tpl.substr(open, close - open + 1));
        }
        pos = close + 1;
    }
    return out;
}

const std::string& default_system_message() {
    static const std::string kMessage =
        "You are a precise string-manipulation assistant. Follow the output format exactly.";
    return kMessage;
}

PromptBundle render_baseline(const TaskInstance& instance, const Strategy& strategy,
                             const TemplateRegistry& registry) {
    if (strategy.is_dnc()) {
        throw config_error("render_baseline called with the divide-and-conquer strategy");
    }
    PromptBundle bundle;
    bundle.system_message = default_system_message();
    const std::string& tpl = registry.get(baseline_template_name(instance.task, strategy.kind));
    bundle.user_messages.push_back(substitute_placeholders(tpl, instance_vars(instance)));
    return bundle;
}

std::string render_dnc_stage(const TaskInstance& instance, int stage,
                             const std::optional<std::string>& prior_output, int shots,
                             const TemplateRegistry& registry) {
    if (stage < 1 || stage > 3) throw config_error("divide-and-conquer stage must be 1, 2, or 3");
    if (shots < 0 || shots > 3) throw config_error("stage shots must be in [0, 3]");
    if (stage == 1 && prior_output.has_value()) {
        throw pipeline_error("stage 1 takes no prior output");
    }
    if (stage > 1 && !prior_output.has_value()) {
        throw pipeline_error("stage " + std::to_string(stage) +
                             " requires the previous stage's output");
    }

    std::map<std::string, std::string> vars = instance_vars(instance);
    if (prior_output) vars["prior"] = *prior_output;

    const char* tpl_name = nullptr;
    const StageShot* shot_pool = nullptr;
    if (stage == 1) {
        tpl_name = "dnc_stage1";
        shot_pool = kStage1Shots;
    } else if (stage == 3) {
        tpl_name = "dnc_stage3";
        shot_pool = kStage3Shots;
    } else {
        switch (instance.task) {
            case TaskKind::Deletion:
                tpl_name = "dnc_stage2_deletion";
                shot_pool = kStage2DeletionShots;
                break;
            case TaskKind::Insertion:
                tpl_name = "dnc_stage2_insertion";
                shot_pool = kStage2InsertionShots;
                break;
            case TaskKind::Substitution:
                tpl_name = "dnc_stage2_substitution";
                shot_pool = kStage2SubstitutionShots;
                break;
        }
    }
    vars["examples"] = examples_block(shot_pool, shots);
    return substitute_placeholders(registry.get(tpl_name), vars);
}

PromptBundle render_dnc_bundle(const TaskInstance& instance, const Strategy& strategy,
                               const TemplateRegistry& registry) {
    if (!strategy.is_dnc()) throw config_error("render_dnc_bundle needs the dnc strategy");
    PromptBundle bundle;
    bundle.system_message = default_system_message();
    bundle.user_messages.push_back(
        render_dnc_stage(instance, 1, std::nullopt, strategy.stage_shots[0], registry));
    // Stages 2 and 3 keep {prior} unresolved until the chain runs.
    bundle.user_messages.push_back(
        render_dnc_stage(instance, 2, std::string("{prior}"), strategy.stage_shots[1], registry));
    bundle.user_messages.push_back(
        render_dnc_stage(instance, 3, std::string("{prior}"), strategy.stage_shots[2], registry));
    for (std::string_view label : kDncStageLabels) bundle.stage_labels.emplace_back(label);
    return bundle;
}

std::string dnc_stage_oracle(const TaskInstance& instance, int stage) {
    switch (stage) {
        case 1: return atomize(instance.word);
        case 2: return atomize(std::string_view(instance.expected));
        case 3: return instance.expected;
        default: throw config_error("divide-and-conquer stage must be 1, 2, or 3");
    }
}

DiagnosticKind parse_diagnostic(std::string_view name) {
    if (name == "spelling") return DiagnosticKind::Spelling;
    if (name == "retrieval") return DiagnosticKind::Retrieval;
    if (name == "counting") return DiagnosticKind::Counting;
    throw config_error("unknown diagnostic: " + std::string(name) +
                       " (expected spelling, retrieval, or counting)");
}

std::string_view diagnostic_name(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::Spelling: return "spelling";
        case DiagnosticKind::Retrieval: return "retrieval";
        case DiagnosticKind::Counting: return "counting";
    }
    return "unknown";
}

std::string render_diagnostic(DiagnosticKind kind, const Word& word, char probe_letter,
                              const TemplateRegistry& registry) {
    std::map<std::string, std::string> vars = {{"word", word.text()},
                                               {"target", std::string(1, probe_letter)}};
    switch (kind) {
        case DiagnosticKind::Spelling:
            return substitute_placeholders(registry.get("diag_spelling"), vars);
        case DiagnosticKind::Retrieval:
            return substitute_placeholders(registry.get("diag_retrieval"), vars);
        case DiagnosticKind::Counting:
            return substitute_placeholders(registry.get("diag_counting"), vars);
    }
    throw config_error("unreachable diagnostic kind");
}

std::optional<std::string> extract_answer(std::string_view raw) {
    const bool blank = std::all_of(raw.begin(), raw.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c));
    });
    if (blank) return std::nullopt;

    // Last case-insensitive "answer:".
    constexpr std::string_view kMarker = "answer:";
    std::size_t marker_pos = std::string_view::npos;
    for (std::size_t i = 0; i + kMarker.size() <= raw.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < kMarker.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(raw[i + j])) != kMarker[j]) {
                match = false;
                break;
            }
        }
        if (match) marker_pos = i;
    }

    if (marker_pos != std::string_view::npos) {
        std::string_view rest = raw.substr(marker_pos + kMarker.size());
        const std::size_t eol = rest.find('\n');
        if (eol != std::string_view::npos) rest = rest.substr(0, eol);
        return strip_extracted(rest);
    }

    // Fallback: last non-empty line.
    std::size_t end = raw.size();
    while (end > 0) {
        std::size_t start = raw.rfind('\n', end - 1);
        start = (start == std::string_view::npos) ? 0 : start + 1;
        const std::string_view line = raw.substr(start, end - start);
        const bool line_blank = std::all_of(line.begin(), line.end(), [](char c) {
            return std::isspace(static_cast<unsigned char>(c));
        });
        if (!line_blank) return strip_extracted(line);
        if (start == 0) break;
        end = start - 1;
    }
    return std::nullopt;
}

std::optional<ParsedPrompt> parse_prompt(std::string_view user_message) {
    // The question sits on the last "Question: " line; single-line templates
    // (cot, diagnostics) have no prefix.
    std::string_view question;
    constexpr std::string_view kPrefix = "Question: ";
    const std::size_t q = user_message.rfind(kPrefix);
    if (q != std::string_view::npos) {
        question = user_message.substr(q + kPrefix.size());
        const std::size_t eol = question.find('\n');
        if (eol != std::string_view::npos) question = question.substr(0, eol);
    } else {
        const std::size_t eol = user_message.find('\n');
        question = user_message.substr(0, eol == std::string_view::npos ? user_message.size()
                                                                        : eol);
    }
    // Drop the trailing output-format boilerplate; its quoted "Answer:" must
    // not count as a question argument.
    for (std::string_view tail : {std::string_view(" Show you reasoning"),
                                  std::string_view(" Please ")}) {
        const std::size_t cut = question.find(tail);
        if (cut != std::string_view::npos) question = question.substr(0, cut);
    }

    const std::vector<std::string> args = quoted_args(question);
    const bool spaced_stage =
        user_message.find("space-separated characters") != std::string_view::npos;
    const auto single = [](const std::string& s) -> std::optional<char> {
        if (s.size() != 1) return std::nullopt;
        return s[0];
    };

    ParsedPrompt parsed{};
    using Kind = ParsedPrompt::Kind;
    if (question.starts_with("Rewrite ")) {
        if (args.size() != 1) return std::nullopt;
        parsed.kind = Kind::Stage1Atomize;
        parsed.sequence = args[0];
        return parsed;
    }
    if (question.starts_with("Join ")) {
        if (args.size() != 1) return std::nullopt;
        parsed.kind = Kind::Stage3Join;
        parsed.sequence = args[0];
        return parsed;
    }
    if (question.starts_with("Spell the word ")) {
        if (args.size() != 1) return std::nullopt;
        parsed.kind = Kind::DiagSpelling;
        parsed.sequence = args[0];
        return parsed;
    }
    if (question.starts_with("Is the letter ")) {
        if (args.size() != 2) return std::nullopt;
        const auto letter = single(args[0]);
        if (!letter) return std::nullopt;
        parsed.kind = Kind::DiagRetrieval;
        parsed.target = *letter;
        parsed.sequence = args[1];
        return parsed;
    }
    if (question.starts_with("How many distinct characters ")) {
        if (args.size() != 1) return std::nullopt;
        parsed.kind = Kind::DiagCounting;
        parsed.sequence = args[0];
        return parsed;
    }
    if (question.starts_with("Delete every instance of ")) {
        if (args.size() != 2) return std::nullopt;
        const auto target = single(args[0]);
        if (!target) return std::nullopt;
        parsed.kind = spaced_stage ? Kind::Stage2Deletion : Kind::BaselineDeletion;
        parsed.target = *target;
        parsed.sequence = args[1];
        return parsed;
    }
    if (question.starts_with("Add an ")) {
        if (args.size() != 3) return std::nullopt;
        const auto newchar = single(args[0]);
        const auto anchor = single(args[1]);
        if (!newchar || !anchor) return std::nullopt;
        parsed.kind = spaced_stage ? Kind::Stage2Insertion : Kind::BaselineInsertion;
        parsed.replacement = *newchar;
        parsed.target = *anchor;
        parsed.sequence = args[2];
        return parsed;
    }
    if (question.starts_with("Substitute ")) {
        if (args.size() != 3) return std::nullopt;
        const auto target = single(args[0]);
        const auto repl = single(args[1]);
        if (!target || !repl) return std::nullopt;
        parsed.kind = spaced_stage ? Kind::Stage2Substitution : Kind::BaselineSubstitution;
        parsed.target = *target;
        parsed.replacement = *repl;
        parsed.sequence = args[2];
        return parsed;
    }
    return std::nullopt;
}

}  // namespace atomize
