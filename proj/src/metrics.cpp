#include "arena/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "arena/error.hpp"

namespace arena {

namespace {

std::unordered_map<std::string, std::size_t> ngram_counts(
    const TokenSequence& tokens, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      gram += ' ';
      gram += tokens[i + k];
    }
    ++counts[gram];
  }
  return counts;
}

std::size_t ngram_total(const TokenSequence& tokens, std::size_t n) {
  return tokens.size() >= n ? tokens.size() - n + 1 : 0;
}

RougeScore make_score(std::size_t overlap, std::size_t candidate_total,
                      std::size_t reference_total) {
  RougeScore s;
  if (candidate_total > 0) {
    s.precision = static_cast<double>(overlap) / static_cast<double>(candidate_total);
  }
  if (reference_total > 0) {
    s.recall = static_cast<double>(overlap) / static_cast<double>(reference_total);
  }
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

RougeScore rouge_n(const TokenSequence& candidate,
                   const TokenSequence& reference, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "rouge_n requires n >= 1");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return make_score(overlap, ngram_total(candidate, n), ngram_total(reference, n));
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(const TokenSequence& candidate,
                   const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return {};
  return make_score(lcs_length(candidate, reference), candidate.size(),
                    reference.size());
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine over vectors of dimension " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine of a zero vector is undefined");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace arena
