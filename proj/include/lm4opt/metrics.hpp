#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lm4opt/llm_gateway.hpp"
#include "lm4opt/prompts.hpp"

namespace lm4opt {

using TokenSeq = std::vector<std::string>;
using EmbeddingSeq = std::vector<std::vector<double>>;

// LaTeX-aware tokenization: backslash commands stay atomic, braces and
// sub/superscript markers are single tokens, identifier and number runs
// group, whitespace only separates.
TokenSeq tokenize_latex(std::string_view text);

struct MetricValue {
    double value = 0.0;
    bool degenerate = false;  // empty candidate or reference
    operator double() const { return value; }
};

// BLEU with clipped n-gram precisions for n = 1..min(max_n, |candidate|),
// geometric mean, multiplicative brevity penalty exp(1 - |ref|/|cand|) for
// short candidates, no smoothing: any zero precision zeroes the score.
MetricValue bleu(const TokenSeq& candidate, const TokenSeq& reference, int max_n = 4);

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// N-gram overlap F-measure (clipped counts); zero when either side has no
// n-grams of order n.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

// Longest-common-subsequence F-measure.
RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

struct OverlapScores {
    double bleu = 0.0;
    double rouge1_f = 0.0;
    double rouge2_f = 0.0;
    double rougeL_f = 0.0;
};

// Tokenizes both texts with tokenize_latex and computes all overlap metrics.
OverlapScores compute_overlap(std::string_view candidate_text, std::string_view reference_text);

struct BertScoreResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Greedy-matching embedding similarity: precision averages each candidate
// token's best cosine against the reference, recall the transpose, f1 the
// harmonic mean (0 when either side is 0). Throws MetricError on empty
// sequences or zero vectors.
BertScoreResult bertscore(const EmbeddingSeq& candidate, const EmbeddingSeq& reference);

// Turns token lists into per-token vectors. Implementations must return one
// vector per token, all of one dimension.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual EmbeddingSeq embed(const TokenSeq& tokens) = 0;
    virtual std::string id() const = 0;
};

// Deterministic offline provider: each distinct token maps to a fixed
// unit vector in the nonnegative orthant (so all similarities are >= 0 and
// scores stay within [0,1]).
class HashEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HashEmbeddingProvider(std::size_t dim = 16);
    EmbeddingSeq embed(const TokenSeq& tokens) override;
    std::string id() const override;

  private:
    std::size_t dim_;
};

// Remote provider: POST {"tokens": [...]} and expect {"vectors": [[...]]}
// of equal length and fixed dimension.
class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    HttpEmbeddingProvider(std::string endpoint_url, long timeout_ms = 30000);
    EmbeddingSeq embed(const TokenSeq& tokens) override;
    std::string id() const override;

  private:
    std::string url_;
    long timeout_ms_;
};

struct RubricFieldFlags {
    bool extracted = false;
    bool defaulted = false;
    bool clamped = false;
    bool rounded = false;  // fractional score rounded half-up
};

// Raw judge scores pulled out of the evaluation text, clamped to their
// ranges, with per-field provenance flags.
struct LameRubric {
    int objective_score = 0;   // 0..10
    int constraint_score = 0;  // 0..10
    int variable_score = 0;    // 0..10
    int overall_score = 0;     // 0..40
    std::string analysis_text;
    RubricFieldFlags objective_flags, constraint_flags, variable_flags, overall_flags;
};

// Regex extraction of the four labelled score lines (case-insensitive,
// flexible whitespace, any line order). Missing lines default to 0, values
// outside the range clamp, fractional values round half-up; extraction is
// total and the flags carry the signal.
LameRubric extract_rubric(std::string_view judge_text);

struct LameWeights {
    double w_o = 0.4;
    double w_c = 0.3;
    double w_v = 0.2;
    double w_a = 0.1;
};

// Throws MetricError unless all weights are nonnegative and sum to 1
// within 1e-9.
void validate_weights(const LameWeights& w);

struct LameScore {
    double value = 0.0;  // in [0,1]
    LameRubric rubric;
    int k = 0;
    std::string judge_backend_id;
};

// value = w_o*(objective/10) + w_c*(constraint/10) + w_v*(variable/10)
//       + w_a*(overall/40)
LameScore aggregate_lame(const LameRubric& rubric, const LameWeights& weights);

// Full judge round trip: render the evaluation prompt with k
// demonstrations, query the judge, extract and aggregate.
LameScore lame_score(std::string_view p, std::string_view g, std::string_view c, int k,
                     const DemonstrationSet& demos, Gateway& judge, const LameWeights& weights,
                     double temperature = 0.0, std::string_view request_tag = "lame");

}  // namespace lm4opt
