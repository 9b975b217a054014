#include "lm4opt/ranker.hpp"

#include <algorithm>
#include <random>

#include "lm4opt/formulation.hpp"

namespace lm4opt {

void validate_candidate_set(const CandidateSet& cands) {
    for (const auto& c : cands.candidates) {
        if (c.formulation_text.empty()) {
            throw RankingError("candidate set for " + cands.problem_id +
                                   " has an empty formulation",
                               {});
        }
    }
    for (std::size_t i = 0; i < cands.candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < cands.candidates.size(); ++j) {
            if (cands.candidates[i].strategy == cands.candidates[j].strategy) {
                throw RankingError("candidate set for " + cands.problem_id +
                                       " repeats strategy " +
                                       to_string(cands.candidates[i].strategy),
                                   {});
            }
        }
    }
}

FallbackPolicy fallback_policy_from_string(const std::string& s) {
    if (s == "fail") {
        return FallbackPolicy::Fail;
    }
    if (s == "few_shot") {
        return FallbackPolicy::FewShot;
    }
    if (s == "chain_of_thought") {
        return FallbackPolicy::ChainOfThought;
    }
    if (s == "max_constraints") {
        return FallbackPolicy::MaxConstraints;
    }
    throw ConfigError("unknown fallback policy: " + s);
}

std::string to_string(FallbackPolicy p) {
    switch (p) {
        case FallbackPolicy::Fail:
            return "fail";
        case FallbackPolicy::FewShot:
            return "few_shot";
        case FallbackPolicy::ChainOfThought:
            return "chain_of_thought";
        case FallbackPolicy::MaxConstraints:
            return "max_constraints";
    }
    return "few_shot";
}

const ResponseSchema& comparison_schema() {
    static const ResponseSchema schema = [] {
        ResponseSchema s;
        s.name = "comparison_result";
        s.fields = {
            {"best", ResponseSchema::Field::Type::Integer, 1, 2, false},
            {"second_best", ResponseSchema::Field::Type::Integer, 1, 2, false},
            {"reasoning_steps", ResponseSchema::Field::Type::Text, std::nullopt, std::nullopt,
             true},
        };
        s.semantic_rule_text = "provide each rank only once (best and second_best must differ)";
        s.semantic_check = [](const nlohmann::json& v) -> std::optional<std::string> {
            if (v["best"].get<long>() == v["second_best"].get<long>()) {
                return "best and second_best hold the same rank";
            }
            return std::nullopt;
        };
        return s;
    }();
    return schema;
}

ComparisonResult parse_comparison(const nlohmann::json& raw) {
    nlohmann::json normalized;
    if (auto err = comparison_schema().validate(raw, normalized)) {
        throw RankingError("invalid comparison verdict: " + *err, {});
    }
    ComparisonResult r;
    r.best = normalized["best"].get<int>();
    r.second_best = normalized["second_best"].get<int>();
    r.reasoning_steps = normalized["reasoning_steps"].get<std::string>();
    return r;
}

namespace {

// Winner of the fallback policy when the bracket cannot finish.
int fallback_winner(const CandidateSet& cands, FallbackPolicy policy) {
    Strategy want = Strategy::FewShot;
    switch (policy) {
        case FallbackPolicy::FewShot:
            want = Strategy::FewShot;
            break;
        case FallbackPolicy::ChainOfThought:
            want = Strategy::ChainOfThought;
            break;
        case FallbackPolicy::MaxConstraints: {
            std::size_t best = 0;
            std::size_t best_count = 0;
            for (std::size_t i = 0; i < cands.candidates.size(); ++i) {
                auto parsed = parse_formulation(cands.candidates[i].formulation_text);
                if (i == 0 || parsed.constraints.size() > best_count) {
                    best = i;
                    best_count = parsed.constraints.size();
                }
            }
            return static_cast<int>(best) + 1;
        }
        case FallbackPolicy::Fail:
            break;
    }
    for (std::size_t i = 0; i < cands.candidates.size(); ++i) {
        if (cands.candidates[i].strategy == want) {
            return static_cast<int>(i) + 1;
        }
    }
    return 2;
}

}  // namespace

TournamentOutcome run_tournament(std::string_view description, const CandidateSet& cands,
                                 Gateway& gateway, const RankerConfig& cfg) {
    validate_candidate_set(cands);

    TournamentOutcome outcome;
    outcome.presentation_order = {1, 2, 3};
    if (cfg.randomize_order) {
        std::mt19937_64 rng(cfg.seed);
        std::shuffle(outcome.presentation_order.begin(), outcome.presentation_order.end(), rng);
    }

    auto text_of = [&](int index) -> const std::string& {
        return cands.candidates[static_cast<std::size_t>(index - 1)].formulation_text;
    };

    // One pairwise judgment; returns the winning 1-based candidate index.
    auto compare = [&](int left, int right, const char* tag_suffix) -> int {
        auto prompt = render_ranking_prompt(description, text_of(left), text_of(right));
        ChatRequest req;
        req.messages = {{"user", prompt.text}};
        req.temperature = cfg.temperature;
        req.max_output_tokens = cfg.max_output_tokens;
        req.response_schema = comparison_schema();
        req.request_tag = cands.problem_id + "/" + tag_suffix;

        ChatResponse resp = gateway.complete_structured(req);
        ComparisonResult verdict = parse_comparison(*resp.structured_value);
        outcome.comparisons.push_back({left, right, verdict});
        return verdict.best == 1 ? left : right;
    };

    const auto& order = outcome.presentation_order;
    try {
        int first_winner = compare(order[0], order[1], "rank1");
        outcome.winner_index = compare(first_winner, order[2], "rank2");
    } catch (const Error& e) {
        if (cfg.fallback == FallbackPolicy::Fail) {
            throw RankingError("tournament for " + cands.problem_id + " failed: " + e.what(),
                               outcome.comparisons);
        }
        outcome.winner_index = fallback_winner(cands, cfg.fallback);
        outcome.fallback_used = true;
    }

    outcome.winner_strategy =
        cands.candidates[static_cast<std::size_t>(outcome.winner_index - 1)].strategy;
    return outcome;
}

}  // namespace lm4opt
