#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lm4opt {

// The three candidate-generation strategies, in generation order.
enum class Strategy { Direct, FewShot, ChainOfThought };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);
constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::Direct, Strategy::FewShot,
                                                    Strategy::ChainOfThought};

// One worked evaluation example for the judge prompt.
struct Demonstration {
    std::string problem_description;
    std::string ground_truth_formulation;
    std::string candidate_formulation;
    std::string worked_evaluation_text;
};

// items.size() >= k and k in {1,3,5}; every worked evaluation must carry the
// four labelled score lines of the required output format.
struct DemonstrationSet {
    std::vector<Demonstration> items;
    int k = 1;
};

struct RenderedPrompt {
    std::string text;
    std::string strategy_or_role;
    std::string template_version;
};

namespace templates {

enum class Id { Direct, FewShot, ChainOfThought, Ranking, LameTask, CorrectiveRetry };

inline constexpr std::string_view kVersion = "v1";

std::string_view text(Id id);

// FNV-1a 64 of the template bytes, hex-encoded. Drift detector for the
// shipped asset copies.
std::string checksum(Id id);

}  // namespace templates

// Renders the generation prompt for one strategy; the description is
// appended at the template's trailing slot. Throws PromptError on an empty
// description or one containing a reserved template marker.
RenderedPrompt render_generation_prompt(Strategy strategy, std::string_view description);

// Renders the pairwise ranking prompt with the problem description and the
// two candidate formulations inserted under their labelled slots.
RenderedPrompt render_ranking_prompt(std::string_view description, std::string_view cand1,
                                     std::string_view cand2);

// Renders the judge prompt: task definition, the first `demos.k`
// demonstrations, then the test triple (p, g, c).
RenderedPrompt render_lame_prompt(const DemonstrationSet& demos, std::string_view p,
                                  std::string_view g, std::string_view c);

// Throws PromptError when k or the items violate the DemonstrationSet rules.
void validate_demonstrations(const DemonstrationSet& demos);

// Demonstration file loader: one JSON record per line with the four
// Demonstration fields. The set is validated before being returned.
DemonstrationSet load_demonstrations(const std::filesystem::path& path, int k);

// The demonstration set shipped with the tool (5 items over the fixture
// problems), used when no --demos path is given.
DemonstrationSet default_demonstrations(int k);

// Corrective instruction appended when a structured response fails
// validation and is re-asked.
std::string_view corrective_retry_text();

}  // namespace lm4opt
