#include "ats/rouge.hpp"

#include <algorithm>
#include <unordered_map>

#include "ats/errors.hpp"

namespace ats {
namespace {

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

RougeScore rouge_1(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) return {};

  std::unordered_map<std::string, std::size_t> ref_counts;
  for (const auto& t : reference) ++ref_counts[t];

  std::unordered_map<std::string, std::size_t> cand_counts;
  for (const auto& t : candidate) ++cand_counts[t];

  std::size_t overlap = 0;
  for (const auto& [token, count] : cand_counts) {
    const auto it = ref_counts.find(token);
    if (it != ref_counts.end()) overlap += std::min(count, it->second);
  }

  RougeScore s;
  s.precision = static_cast<double>(overlap) / static_cast<double>(candidate.size());
  s.recall = static_cast<double>(overlap) / static_cast<double>(reference.size());
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over positions of a (rows) and b (cols).
  std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  if (candidate.empty() || reference.empty()) return {};
  const auto lcs = static_cast<double>(lcs_length(candidate, reference));
  RougeScore s;
  s.precision = lcs / static_cast<double>(candidate.size());
  s.recall = lcs / static_cast<double>(reference.size());
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

CorpusRouge corpus_scores(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs) {
  if (pairs.empty()) throw EmptyCorpus("corpus_scores: no candidate/reference pairs");
  CorpusRouge out;
  out.pair_count = pairs.size();
  for (const auto& [candidate, reference] : pairs) {
    out.rouge1_f1 += rouge_1(candidate, reference).f1;
    out.rougeL_f1 += rouge_l(candidate, reference).f1;
  }
  const double n = static_cast<double>(pairs.size());
  out.rouge1_f1 = out.rouge1_f1 / n * 100.0;
  out.rougeL_f1 = out.rougeL_f1 / n * 100.0;
  return out;
}

}  // namespace ats
