#pragma once

#include <string>

#include "arena/corpus.hpp"
#include "arena/embedding.hpp"

namespace arena {

// POST {instruction, response} -> {score}. Any transport error, non-200
// status or malformed reply throws.
class HttpQualityScorer : public QualityScorer {
 public:
  explicit HttpQualityScorer(std::string url, double timeout_seconds = 30.0);
  double score(const FinetunePair& pair) override;

 private:
  Endpoint endpoint_;
  double timeout_seconds_;
};

// Uses the quality_score already stored on each pair; a pair without one is a
// scorer failure.
class StoredScoreScorer : public QualityScorer {
 public:
  double score(const FinetunePair& pair) override;
};

}  // namespace arena
