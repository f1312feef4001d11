#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ats {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using TokenSeq = std::vector<std::string>;

/// Unigram overlap score: clipped counts, P = overlap/|cand|,
/// R = overlap/|ref|. Empty candidate or reference gives all zeros.
RougeScore rouge_1(const TokenSeq& candidate, const TokenSeq& reference);

/// Longest common subsequence length (classic DP).
std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

/// LCS-based score with a plain (beta = 1) harmonic-mean F1.
RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

struct CorpusRouge {
  double rouge1_f1 = 0.0;  // mean per-pair F1, reported x100
  double rougeL_f1 = 0.0;
  std::size_t pair_count = 0;
};

/// Unweighted mean of per-pair F1 scores, scaled by 100 for reporting.
/// Throws EmptyCorpus on an empty pair list.
CorpusRouge corpus_scores(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs);

}  // namespace ats
