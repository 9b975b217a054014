#include "lm4opt/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <regex>

#include "lm4opt/hash.hpp"

#include <httplib.h>

namespace lm4opt {

// ------------------------------------------------------------- tokenizer --

namespace {

bool is_letter(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

std::size_t utf8_len(unsigned char lead) {
    if (lead < 0x80) {
        return 1;
    }
    if ((lead >> 5) == 0x6) {
        return 2;
    }
    if ((lead >> 4) == 0xE) {
        return 3;
    }
    if ((lead >> 3) == 0x1E) {
        return 4;
    }
    return 1;
}

}  // namespace

TokenSeq tokenize_latex(std::string_view text) {
    TokenSeq tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '\\') {
            if (i + 1 < text.size() && is_letter(text[i + 1])) {
                std::size_t j = i + 1;
                while (j < text.size() && is_letter(text[j])) {
                    ++j;
                }
                tokens.emplace_back(text.substr(i, j - i));
                i = j;
                continue;
            }
            // Escaped character (\{, \$, \\, ...): one token of two chars.
            std::size_t len = std::min<std::size_t>(2, text.size() - i);
            tokens.emplace_back(text.substr(i, len));
            i += len;
            continue;
        }
        if (is_letter(c)) {
            std::size_t j = i;
            while (j < text.size() && is_letter(text[j])) {
                ++j;
            }
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
            continue;
        }
        if (is_digit(c)) {
            std::size_t j = i;
            while (j < text.size() && is_digit(text[j])) {
                ++j;
            }
            if (j < text.size() && text[j] == '.' && j + 1 < text.size() && is_digit(text[j + 1])) {
                ++j;
                while (j < text.size() && is_digit(text[j])) {
                    ++j;
                }
            }
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
            continue;
        }
        std::size_t len = std::min(utf8_len(static_cast<unsigned char>(c)), text.size() - i);
        tokens.emplace_back(text.substr(i, len));
        i += len;
    }
    return tokens;
}

// ------------------------------------------------------- n-gram overlaps --

namespace {

// Rolling-hash view of the n-grams of a sequence: each n-gram is keyed by
// the FNV hash of its tokens with separators. Collisions are no concern at
// these sizes but the oracle in the tests double-checks with exact keys.
std::map<std::uint64_t, long> ngram_counts(const TokenSeq& seq, int n) {
    std::map<std::uint64_t, long> counts;
    if (n <= 0 || seq.size() < static_cast<std::size_t>(n)) {
        return counts;
    }
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.size(); ++i) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int j = 0; j < n; ++j) {
            for (char ch : seq[i + static_cast<std::size_t>(j)]) {
                h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
            }
            h = (h ^ 0x1F) * 0x100000001b3ULL;  // token separator
        }
        ++counts[h];
    }
    return counts;
}

long clipped_overlap(const std::map<std::uint64_t, long>& cand,
                     const std::map<std::uint64_t, long>& ref) {
    long overlap = 0;
    for (const auto& [key, count] : cand) {
        auto it = ref.find(key);
        if (it != ref.end()) {
            overlap += std::min(count, it->second);
        }
    }
    return overlap;
}

double harmonic_f1(double p, double r) {
    if (p <= 0.0 || r <= 0.0) {
        return 0.0;
    }
    return 2.0 * p * r / (p + r);
}

}  // namespace

MetricValue bleu(const TokenSeq& candidate, const TokenSeq& reference, int max_n) {
    if (max_n < 1) {
        throw MetricError("bleu: max_n must be >= 1");
    }
    if (candidate.empty() || reference.empty()) {
        return {0.0, true};
    }
    // Orders above the candidate length would contribute empty 0/0
    // precisions; capping keeps identical short pairs at score 1.
    int effective_n = std::min<int>(max_n, static_cast<int>(candidate.size()));
    double log_sum = 0.0;
    for (int n = 1; n <= effective_n; ++n) {
        auto cand_counts = ngram_counts(candidate, n);
        auto ref_counts = ngram_counts(reference, n);
        long total = 0;
        for (const auto& [_, c] : cand_counts) {
            total += c;
        }
        long overlap = clipped_overlap(cand_counts, ref_counts);
        if (overlap == 0 || total == 0) {
            return {0.0, false};
        }
        log_sum += std::log(static_cast<double>(overlap) / static_cast<double>(total));
    }
    double score = std::exp(log_sum / effective_n);
    if (candidate.size() < reference.size()) {
        score *= std::exp(1.0 - static_cast<double>(reference.size()) /
                                    static_cast<double>(candidate.size()));
    }
    return {score, false};
}

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
    if (n < 1) {
        throw MetricError("rouge_n: n must be >= 1");
    }
    auto cand_counts = ngram_counts(candidate, n);
    auto ref_counts = ngram_counts(reference, n);
    long cand_total = 0;
    long ref_total = 0;
    for (const auto& [_, c] : cand_counts) {
        cand_total += c;
    }
    for (const auto& [_, c] : ref_counts) {
        ref_total += c;
    }
    if (cand_total == 0 || ref_total == 0) {
        return {};
    }
    long overlap = clipped_overlap(cand_counts, ref_counts);
    double precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    double recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    return {precision, recall, harmonic_f1(precision, recall)};
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
    if (candidate.empty() || reference.empty()) {
        return {};
    }
    // LCS with two rolling rows.
    std::vector<std::size_t> prev(reference.size() + 1, 0);
    std::vector<std::size_t> cur(reference.size() + 1, 0);
    for (std::size_t i = 1; i <= candidate.size(); ++i) {
        for (std::size_t j = 1; j <= reference.size(); ++j) {
            if (candidate[i - 1] == reference[j - 1]) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    auto lcs = static_cast<double>(prev[reference.size()]);
    double precision = lcs / static_cast<double>(candidate.size());
    double recall = lcs / static_cast<double>(reference.size());
    return {precision, recall, harmonic_f1(precision, recall)};
}

OverlapScores compute_overlap(std::string_view candidate_text, std::string_view reference_text) {
    TokenSeq cand = tokenize_latex(candidate_text);
    TokenSeq ref = tokenize_latex(reference_text);
    OverlapScores s;
    s.bleu = bleu(cand, ref).value;
    s.rouge1_f = rouge_n(cand, ref, 1).f1;
    s.rouge2_f = rouge_n(cand, ref, 2).f1;
    s.rougeL_f = rouge_l(cand, ref).f1;
    return s;
}

// --------------------------------------------------------------- bertscore --

BertScoreResult bertscore(const EmbeddingSeq& candidate, const EmbeddingSeq& reference) {
    if (candidate.empty() || reference.empty()) {
        throw MetricError("bertscore: embedding sequences must be nonempty");
    }
    auto norms = [](const EmbeddingSeq& seq) {
        std::vector<double> out;
        out.reserve(seq.size());
        for (const auto& v : seq) {
            double sq = 0.0;
            for (double x : v) {
                sq += x * x;
            }
            if (sq <= 0.0) {
                throw MetricError("bertscore: zero embedding vector");
            }
            out.push_back(std::sqrt(sq));
        }
        return out;
    };
    std::vector<double> cand_norm = norms(candidate);
    std::vector<double> ref_norm = norms(reference);

    std::vector<double> row_max(candidate.size(), -1.0);
    std::vector<double> col_max(reference.size(), -1.0);
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        for (std::size_t j = 0; j < reference.size(); ++j) {
            if (candidate[i].size() != reference[j].size()) {
                throw MetricError("bertscore: embedding dimensions disagree");
            }
            double dot = 0.0;
            for (std::size_t d = 0; d < candidate[i].size(); ++d) {
                dot += candidate[i][d] * reference[j][d];
            }
            double cosine = dot / (cand_norm[i] * ref_norm[j]);
            row_max[i] = std::max(row_max[i], cosine);
            col_max[j] = std::max(col_max[j], cosine);
        }
    }
    BertScoreResult r;
    for (double v : row_max) {
        r.precision += v;
    }
    for (double v : col_max) {
        r.recall += v;
    }
    r.precision /= static_cast<double>(candidate.size());
    r.recall /= static_cast<double>(reference.size());
    r.f1 = harmonic_f1(r.precision, r.recall);
    return r;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim) : dim_(dim == 0 ? 16 : dim) {}

EmbeddingSeq HashEmbeddingProvider::embed(const TokenSeq& tokens) {
    EmbeddingSeq out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        std::mt19937_64 rng(fnv1a64(tok));
        std::uniform_real_distribution<double> uni(0.05, 1.0);
        std::vector<double> v(dim_);
        double sq = 0.0;
        for (auto& x : v) {
            x = uni(rng);
            sq += x * x;
        }
        double norm = std::sqrt(sq);
        for (auto& x : v) {
            x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string HashEmbeddingProvider::id() const {
    return "hash-" + std::to_string(dim_);
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string endpoint_url, long timeout_ms)
    : url_(std::move(endpoint_url)), timeout_ms_(timeout_ms) {}

EmbeddingSeq HttpEmbeddingProvider::embed(const TokenSeq& tokens) {
    std::string url = url_;
    if (url.rfind("http://", 0) != 0) {
        throw MetricError("embedding endpoint must be an http:// URL: " + url_);
    }
    url = url.substr(7);
    auto slash = url.find('/');
    std::string hostport = slash == std::string::npos ? url : url.substr(0, slash);
    std::string path = slash == std::string::npos ? "/embed" : url.substr(slash);
    std::string host = hostport;
    int port = 80;
    if (auto colon = hostport.find(':'); colon != std::string::npos) {
        host = hostport.substr(0, colon);
        port = std::stoi(hostport.substr(colon + 1));
    }
    httplib::Client client(host, port);
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));
    nlohmann::json body;
    body["tokens"] = tokens;
    auto result = client.Post(path, body.dump(), "application/json");
    if (!result || result->status != 200) {
        throw MetricError("embedding request failed: " +
                          (result ? "HTTP " + std::to_string(result->status)
                                  : httplib::to_string(result.error())));
    }
    nlohmann::json parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("vectors") || !parsed["vectors"].is_array()) {
        throw MetricError("embedding response lacks a 'vectors' array");
    }
    EmbeddingSeq out;
    for (const auto& vec : parsed["vectors"]) {
        out.push_back(vec.get<std::vector<double>>());
    }
    if (out.size() != tokens.size()) {
        throw MetricError("embedding response length " + std::to_string(out.size()) +
                          " does not match token count " + std::to_string(tokens.size()));
    }
    for (const auto& v : out) {
        if (v.size() != out.front().size()) {
            throw MetricError("embedding response vectors vary in dimension");
        }
    }
    return out;
}

std::string HttpEmbeddingProvider::id() const {
    return url_;
}

// ------------------------------------------------------------------ LAME --

namespace {

struct ExtractedScore {
    int value = 0;
    RubricFieldFlags flags;
};

ExtractedScore extract_score(const std::string& text, const char* label_pattern, int maximum) {
    std::regex re(std::string(label_pattern) + R"(\s*:?\s*(-?\d+(?:\.\d+)?)\s*/\s*)" +
                      std::to_string(maximum),
                  std::regex::icase);
    std::smatch m;
    ExtractedScore out;
    if (!std::regex_search(text, m, re)) {
        out.flags.defaulted = true;
        out.value = 0;
        return out;
    }
    out.flags.extracted = true;
    double raw = std::stod(m[1].str());
    double rounded = std::floor(raw + 0.5);
    if (rounded != raw) {
        out.flags.rounded = true;
    }
    int v = static_cast<int>(rounded);
    if (v < 0) {
        v = 0;
        out.flags.clamped = true;
    } else if (v > maximum) {
        v = maximum;
        out.flags.clamped = true;
    }
    out.value = v;
    return out;
}

}  // namespace

LameRubric extract_rubric(std::string_view judge_text) {
    std::string text(judge_text);
    LameRubric r;

    auto obj = extract_score(text, R"(Objective\s+Function\s+Correctness)", 10);
    r.objective_score = obj.value;
    r.objective_flags = obj.flags;

    auto con = extract_score(text, R"(Constraint\s+Accuracy)", 10);
    r.constraint_score = con.value;
    r.constraint_flags = con.flags;

    auto var = extract_score(text, R"(Variable\s+Definitions)", 10);
    r.variable_score = var.value;
    r.variable_flags = var.flags;

    auto overall = extract_score(text, R"(Overall\s+Score)", 40);
    r.overall_score = overall.value;
    r.overall_flags = overall.flags;

    std::regex analysis_re(R"(Overall\s+Analysis\s*:\s*)", std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, analysis_re)) {
        std::string rest = m.suffix().str();
        auto end = rest.find_last_not_of(" \t\r\n");
        r.analysis_text = end == std::string::npos ? "" : rest.substr(0, end + 1);
    }
    return r;
}

void validate_weights(const LameWeights& w) {
    if (w.w_o < 0 || w.w_c < 0 || w.w_v < 0 || w.w_a < 0) {
        throw MetricError("LAME weights must be nonnegative");
    }
    double sum = w.w_o + w.w_c + w.w_v + w.w_a;
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw MetricError("LAME weights must sum to 1, got " + std::to_string(sum));
    }
}

LameScore aggregate_lame(const LameRubric& rubric, const LameWeights& weights) {
    validate_weights(weights);
    LameScore s;
    s.rubric = rubric;
    s.value = weights.w_o * (rubric.objective_score / 10.0) +
              weights.w_c * (rubric.constraint_score / 10.0) +
              weights.w_v * (rubric.variable_score / 10.0) +
              weights.w_a * (rubric.overall_score / 40.0);
    return s;
}

LameScore lame_score(std::string_view p, std::string_view g, std::string_view c, int k,
                     const DemonstrationSet& demos, Gateway& judge, const LameWeights& weights,
                     double temperature, std::string_view request_tag) {
    validate_weights(weights);
    DemonstrationSet sized = demos;
    sized.k = k;
    auto prompt = render_lame_prompt(sized, p, g, c);

    ChatRequest req;
    req.messages = {{"user", prompt.text}};
    req.temperature = temperature;
    req.request_tag = std::string(request_tag);
    ChatResponse resp = judge.complete(req);

    LameScore score = aggregate_lame(extract_rubric(resp.text), weights);
    score.k = k;
    score.judge_backend_id = resp.backend_id;
    return score;
}

}  // namespace lm4opt
