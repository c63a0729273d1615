#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

// Normalized word tokens: no whitespace, no empty strings.
using TokenSequence = std::vector<std::string>;

// Turkish-aware lowercasing (İ->i, I->ı, then Unicode simple lowercase),
// whitespace split, leading/trailing punctuation stripped, empties dropped.
TokenSequence tokenize(std::string_view text);

// Turkish lowercasing of a whole UTF-8 string; exposed for tests.
std::string turkish_lower(std::string_view text);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 2PR/(P+R), or 0 when P+R == 0.
double f1_score(double precision, double recall);

// Clipped n-gram overlap.
RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference,
                   std::size_t n);

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference);

struct EmbeddingVector {
  std::vector<double> components;

  std::size_t dimension() const { return components.size(); }
};

// dot(a,b)/(|a||b|). Throws kDimensionMismatch or kZeroVector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

inline double cosine_similarity(const EmbeddingVector& a,
                                const EmbeddingVector& b) {
  return cosine_similarity(a.components, b.components);
}

}  // namespace arena
