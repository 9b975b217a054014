#include "lm4opt/prompts.hpp"

#include <algorithm>

#include "lm4opt/errors.hpp"
#include "lm4opt/hash.hpp"
#include "lm4opt/jsonl.hpp"

namespace lm4opt::templates {
// Canonical demonstration set, JSONL, mirrored at assets/demos/default_demos.jsonl.
extern const std::string_view kDefaultDemos;
}  // namespace lm4opt::templates

namespace lm4opt {

namespace {

constexpr std::string_view kSectionProblem = "Problem Description:";
constexpr std::string_view kSectionGroundTruth = "Ground Truth Formulation:";
constexpr std::string_view kSectionCandidate = "Candidate Formulation:";
constexpr std::string_view kSectionEvaluation = "Evaluation:";
constexpr std::string_view kSectionCand1 = "Candidate 1:";
constexpr std::string_view kSectionCand2 = "Candidate 2:";

const std::array<std::string_view, 3> kGenerationMarkers = {
    "Problem description to formulate:",
    "Now, apply the same procedure for the following problem description:",
    "Problem description:",
};
const std::array<std::string_view, 3> kRankingMarkers = {kSectionProblem, kSectionCand1,
                                                         kSectionCand2};
const std::array<std::string_view, 4> kLameMarkers = {kSectionProblem, kSectionGroundTruth,
                                                      kSectionCandidate, kSectionEvaluation};

template <std::size_t N>
void check_input(std::string_view input, const char* what,
                 const std::array<std::string_view, N>& markers) {
    if (input.empty()) {
        throw PromptError(std::string(what) + " must not be empty");
    }
    for (auto m : markers) {
        if (input.find(m) != std::string_view::npos) {
            throw PromptError(std::string(what) + " contains the reserved template marker \"" +
                              std::string(m) + "\"");
        }
    }
}

// Inserts `value` on its own line directly below the line holding `label`.
std::string insert_after_label(std::string text, std::string_view label, std::string_view value) {
    std::string needle = std::string(label) + "\n";
    auto pos = text.find(needle);
    if (pos == std::string::npos) {
        throw PromptError("template is missing the slot label \"" + std::string(label) + "\"");
    }
    text.insert(pos + needle.size(), std::string(value) + "\n");
    return text;
}

std::string versioned(std::string_view name) {
    return std::string(name) + "-" + std::string(templates::kVersion);
}

std::string example_block(std::string_view p, std::string_view g, std::string_view c) {
    std::string out;
    out += kSectionProblem;
    out += '\n';
    out += p;
    out += '\n';
    out += kSectionGroundTruth;
    out += '\n';
    out += g;
    out += '\n';
    out += kSectionCandidate;
    out += '\n';
    out += c;
    out += '\n';
    out += kSectionEvaluation;
    out += '\n';
    return out;
}

const std::array<std::string_view, 4> kScoreLabels = {
    "Objective Function Correctness:",
    "Constraint Accuracy:",
    "Variable Definitions:",
    "Overall Score:",
};

}  // namespace

namespace templates {

std::string checksum(Id id) {
    return hex64(fnv1a64(text(id)));
}

}  // namespace templates

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Direct:
            return "direct";
        case Strategy::FewShot:
            return "few_shot";
        case Strategy::ChainOfThought:
            return "chain_of_thought";
    }
    return "direct";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "direct") {
        return Strategy::Direct;
    }
    if (s == "few_shot") {
        return Strategy::FewShot;
    }
    if (s == "chain_of_thought") {
        return Strategy::ChainOfThought;
    }
    throw PromptError("unknown strategy: " + s);
}

RenderedPrompt render_generation_prompt(Strategy strategy, std::string_view description) {
    check_input(description, "description", kGenerationMarkers);
    templates::Id id = templates::Id::Direct;
    switch (strategy) {
        case Strategy::Direct:
            id = templates::Id::Direct;
            break;
        case Strategy::FewShot:
            id = templates::Id::FewShot;
            break;
        case Strategy::ChainOfThought:
            id = templates::Id::ChainOfThought;
            break;
    }
    RenderedPrompt p;
    p.text = std::string(templates::text(id)) + std::string(description);
    p.strategy_or_role = to_string(strategy);
    p.template_version = versioned(to_string(strategy));
    return p;
}

RenderedPrompt render_ranking_prompt(std::string_view description, std::string_view cand1,
                                     std::string_view cand2) {
    check_input(description, "description", kRankingMarkers);
    check_input(cand1, "candidate 1", kRankingMarkers);
    check_input(cand2, "candidate 2", kRankingMarkers);

    std::string text(templates::text(templates::Id::Ranking));
    text = insert_after_label(std::move(text), kSectionProblem, description);
    text = insert_after_label(std::move(text), kSectionCand1, cand1);
    text = insert_after_label(std::move(text), kSectionCand2, cand2);

    RenderedPrompt p;
    p.text = std::move(text);
    p.strategy_or_role = "ranking";
    p.template_version = versioned("ranking");
    return p;
}

void validate_demonstrations(const DemonstrationSet& demos) {
    if (demos.k != 1 && demos.k != 3 && demos.k != 5) {
        throw PromptError("demonstration count k must be 1, 3 or 5, got " +
                          std::to_string(demos.k));
    }
    if (demos.items.size() < static_cast<std::size_t>(demos.k)) {
        throw PromptError("k=" + std::to_string(demos.k) + " exceeds the " +
                          std::to_string(demos.items.size()) + " available demonstrations");
    }
    for (std::size_t i = 0; i < demos.items.size(); ++i) {
        const auto& d = demos.items[i];
        if (d.problem_description.empty() || d.ground_truth_formulation.empty() ||
            d.candidate_formulation.empty() || d.worked_evaluation_text.empty()) {
            throw PromptError("demonstration " + std::to_string(i + 1) + " has an empty field");
        }
        for (auto label : kScoreLabels) {
            if (d.worked_evaluation_text.find(label) == std::string::npos) {
                throw PromptError("demonstration " + std::to_string(i + 1) +
                                  " evaluation text lacks the \"" + std::string(label) +
                                  "\" line required by the output format");
            }
        }
    }
}

RenderedPrompt render_lame_prompt(const DemonstrationSet& demos, std::string_view p,
                                  std::string_view g, std::string_view c) {
    validate_demonstrations(demos);
    check_input(p, "problem description", kLameMarkers);
    check_input(g, "ground truth formulation", kLameMarkers);
    check_input(c, "candidate formulation", kLameMarkers);

    std::string text(templates::text(templates::Id::LameTask));
    text += '\n';
    for (int i = 0; i < demos.k; ++i) {
        const auto& d = demos.items[static_cast<std::size_t>(i)];
        text += "\nDemonstration " + std::to_string(i + 1) + ":\n";
        text += example_block(d.problem_description, d.ground_truth_formulation,
                              d.candidate_formulation);
        text += d.worked_evaluation_text;
        text += '\n';
    }
    text += "\nNow evaluate the following test example.\n";
    text += example_block(p, g, c);

    RenderedPrompt out;
    out.text = std::move(text);
    out.strategy_or_role = "lame_judge";
    out.template_version = versioned("lame");
    return out;
}

namespace {

Demonstration demonstration_from_json(const nlohmann::json& rec) {
    Demonstration d;
    for (const char* key : {"problem_description", "ground_truth_formulation",
                            "candidate_formulation", "worked_evaluation_text"}) {
        if (!rec.contains(key) || !rec[key].is_string()) {
            throw PromptError(std::string("demonstration record missing field '") + key + "'");
        }
    }
    d.problem_description = rec["problem_description"].get<std::string>();
    d.ground_truth_formulation = rec["ground_truth_formulation"].get<std::string>();
    d.candidate_formulation = rec["candidate_formulation"].get<std::string>();
    d.worked_evaluation_text = rec["worked_evaluation_text"].get<std::string>();
    return d;
}

}  // namespace

DemonstrationSet load_demonstrations(const std::filesystem::path& path, int k) {
    DemonstrationSet set;
    set.k = k;
    jsonl::for_each_record(
        path,
        [&](std::size_t, const nlohmann::json& rec) {
            set.items.push_back(demonstration_from_json(rec));
        },
        [](std::string msg) { return PromptError(msg); });
    validate_demonstrations(set);
    return set;
}

DemonstrationSet default_demonstrations(int k) {
    DemonstrationSet set;
    set.k = k;
    std::string_view blob = templates::kDefaultDemos;
    std::size_t pos = 0;
    while (pos < blob.size()) {
        std::size_t nl = blob.find('\n', pos);
        std::string_view line = blob.substr(pos, (nl == std::string_view::npos ? blob.size() : nl) - pos);
        if (!line.empty()) {
            set.items.push_back(demonstration_from_json(nlohmann::json::parse(line)));
        }
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
    validate_demonstrations(set);
    return set;
}

std::string_view corrective_retry_text() {
    return templates::text(templates::Id::CorrectiveRetry);
}

}  // namespace lm4opt
