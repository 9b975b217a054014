#pragma once

// Brute-force reference implementations used only to cross-check the metric
// kernels. They enumerate n-grams as exact token vectors, run the full LCS
// table and compute the cosine matrix in long double, staying independent
// of the hashing/rolling implementations under test.

#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using TokenSeq = std::vector<std::string>;
using EmbeddingSeq = std::vector<std::vector<double>>;

std::map<std::vector<std::string>, long> ngram_multiset(const TokenSeq& seq, int n);

double bleu(const TokenSeq& candidate, const TokenSeq& reference, int max_n = 4);

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

PRF rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

PRF rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

PRF bertscore(const EmbeddingSeq& candidate, const EmbeddingSeq& reference);

TokenSeq random_sequence(std::mt19937_64& rng, int min_len, int max_len, int vocab);

}  // namespace oracle
