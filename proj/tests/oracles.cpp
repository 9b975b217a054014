#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::map<std::vector<std::string>, long> ngram_multiset(const TokenSeq& seq, int n) {
    std::map<std::vector<std::string>, long> out;
    if (n <= 0) {
        return out;
    }
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.size(); ++i) {
        std::vector<std::string> gram(seq.begin() + static_cast<long>(i),
                                      seq.begin() + static_cast<long>(i) + n);
        ++out[gram];
    }
    return out;
}

namespace {

long clipped_common(const std::map<std::vector<std::string>, long>& cand,
                    const std::map<std::vector<std::string>, long>& ref) {
    long overlap = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) {
            overlap += std::min(count, it->second);
        }
    }
    return overlap;
}

double f1(double p, double r) {
    return (p > 0.0 && r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

double bleu(const TokenSeq& candidate, const TokenSeq& reference, int max_n) {
    if (candidate.empty() || reference.empty()) {
        return 0.0;
    }
    int effective = std::min<int>(max_n, static_cast<int>(candidate.size()));
    double product = 1.0;
    for (int n = 1; n <= effective; ++n) {
        auto cand = ngram_multiset(candidate, n);
        auto ref = ngram_multiset(reference, n);
        long total = 0;
        for (const auto& [_, c] : cand) {
            total += c;
        }
        long common = clipped_common(cand, ref);
        if (common == 0) {
            return 0.0;
        }
        product *= static_cast<double>(common) / static_cast<double>(total);
    }
    double score = std::pow(product, 1.0 / effective);
    if (candidate.size() < reference.size()) {
        score *= std::exp(1.0 - static_cast<double>(reference.size()) /
                                    static_cast<double>(candidate.size()));
    }
    return score;
}

PRF rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
    auto cand = ngram_multiset(candidate, n);
    auto ref = ngram_multiset(reference, n);
    long cand_total = 0;
    long ref_total = 0;
    for (const auto& [_, c] : cand) {
        cand_total += c;
    }
    for (const auto& [_, c] : ref) {
        ref_total += c;
    }
    if (cand_total == 0 || ref_total == 0) {
        return {};
    }
    long common = clipped_common(cand, ref);
    PRF out;
    out.precision = static_cast<double>(common) / static_cast<double>(cand_total);
    out.recall = static_cast<double>(common) / static_cast<double>(ref_total);
    out.f1 = f1(out.precision, out.recall);
    return out;
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
    std::vector<std::vector<std::size_t>> table(a.size() + 1,
                                                std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                table[i][j] = table[i - 1][j - 1] + 1;
            } else {
                table[i][j] = std::max(table[i - 1][j], table[i][j - 1]);
            }
        }
    }
    return table[a.size()][b.size()];
}

PRF rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
    if (candidate.empty() || reference.empty()) {
        return {};
    }
    auto lcs = static_cast<double>(lcs_length(candidate, reference));
    PRF out;
    out.precision = lcs / static_cast<double>(candidate.size());
    out.recall = lcs / static_cast<double>(reference.size());
    out.f1 = f1(out.precision, out.recall);
    return out;
}

PRF bertscore(const EmbeddingSeq& candidate, const EmbeddingSeq& reference) {
    auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        long double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += static_cast<long double>(a[i]) * b[i];
            na += static_cast<long double>(a[i]) * a[i];
            nb += static_cast<long double>(b[i]) * b[i];
        }
        return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
    };
    PRF out;
    for (const auto& cv : candidate) {
        double best = -1.0;
        for (const auto& rv : reference) {
            best = std::max(best, cosine(cv, rv));
        }
        out.precision += best;
    }
    for (const auto& rv : reference) {
        double best = -1.0;
        for (const auto& cv : candidate) {
            best = std::max(best, cosine(cv, rv));
        }
        out.recall += best;
    }
    out.precision /= static_cast<double>(candidate.size());
    out.recall /= static_cast<double>(reference.size());
    out.f1 = f1(out.precision, out.recall);
    return out;
}

TokenSeq random_sequence(std::mt19937_64& rng, int min_len, int max_len, int vocab) {
    std::uniform_int_distribution<int> len_dist(min_len, max_len);
    std::uniform_int_distribution<int> tok_dist(0, vocab - 1);
    TokenSeq seq(static_cast<std::size_t>(len_dist(rng)));
    for (auto& t : seq) {
        t = "w" + std::to_string(tok_dist(rng));
    }
    return seq;
}

}  // namespace oracle
