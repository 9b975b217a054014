#pragma once

#include <array>
#include <string>
#include <vector>

#include "lm4opt/llm_gateway.hpp"
#include "lm4opt/prompts.hpp"

namespace lm4opt {

// Verdict of one pairwise comparison. Ranks refer to presentation slots
// (1 = first candidate shown, 2 = second) and may never repeat.
struct ComparisonResult {
    int best = 0;
    int second_best = 0;
    std::string reasoning_steps;
};

struct Candidate {
    Strategy strategy = Strategy::Direct;
    std::string formulation_text;
};

// The three strategy-tagged formulations for one problem, in generation
// order (direct, few-shot, chain-of-thought).
struct CandidateSet {
    std::string problem_id;
    std::array<Candidate, 3> candidates;
};

void validate_candidate_set(const CandidateSet& cands);

struct Comparison {
    int left_index = 0;   // 1-based positions in the CandidateSet
    int right_index = 0;
    ComparisonResult result;
};

struct TournamentOutcome {
    int winner_index = 0;  // 1..3
    Strategy winner_strategy = Strategy::Direct;
    std::vector<Comparison> comparisons;
    bool fallback_used = false;
    std::array<int, 3> presentation_order = {1, 2, 3};
};

enum class FallbackPolicy { Fail, FewShot, ChainOfThought, MaxConstraints };

FallbackPolicy fallback_policy_from_string(const std::string& s);
std::string to_string(FallbackPolicy p);

struct RankerConfig {
    FallbackPolicy fallback = FallbackPolicy::FewShot;
    double temperature = 0.0;
    int max_output_tokens = 1024;
    // Positional-bias studies: shuffle the order candidates are fed through
    // the bracket; the permutation lands in TournamentOutcome.
    bool randomize_order = false;
    std::uint64_t seed = 0;
};

class RankingError : public Error {
  public:
    RankingError(const std::string& msg, std::vector<Comparison> partial)
        : Error(msg), partial_comparisons(std::move(partial)) {}

    std::vector<Comparison> partial_comparisons;
};

// Schema for the structured comparison verdict: best/second_best in {1,2},
// distinct, with a nonempty reasoning_steps justification.
const ResponseSchema& comparison_schema();

// Validates a structured value against the ComparisonResult rules. Throws
// RankingError on out-of-range ranks, duplicate ranks or empty reasoning.
ComparisonResult parse_comparison(const nlohmann::json& raw);

// The sample-by-sample bracket: candidates 1 and 2 are compared first and
// the winner meets candidate 3. On unrecoverable comparison failure the
// configured fallback picks the winner (policy Fail rethrows instead).
TournamentOutcome run_tournament(std::string_view description, const CandidateSet& cands,
                                 Gateway& gateway, const RankerConfig& cfg);

}  // namespace lm4opt
