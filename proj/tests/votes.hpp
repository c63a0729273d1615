#pragma once

#include <random>
#include <string>
#include <vector>

#include "arena/rating.hpp"

namespace testing {

inline arena::Timestamp ts(std::int64_t seconds) {
  return arena::Timestamp{std::chrono::seconds(1714564800 + seconds)};
}

inline arena::Vote make_vote(std::size_t n, std::string a, std::string b,
                             arena::Outcome outcome, std::string record = "r1") {
  arena::Vote v;
  v.vote_id = "v" + std::to_string(n);
  v.record_id = std::move(record);
  v.model_a = std::move(a);
  v.model_b = std::move(b);
  v.outcome = outcome;
  v.judge_id = "judge-" + std::to_string(n % 8);
  v.timestamp = ts(static_cast<std::int64_t>(n));
  return v;
}

// Votes drawn from a Bradley-Terry model: a random pair, then A wins with
// probability s_a / (s_a + s_b). No draws.
inline std::vector<arena::Vote> bradley_terry_votes(const std::vector<std::string>& models,
                                                    const std::vector<double>& strength,
                                                    std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, models.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<arena::Vote> votes;
  votes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    const double p = strength[a] / (strength[a] + strength[b]);
    votes.push_back(make_vote(i, models[a], models[b],
                              u(rng) < p ? arena::Outcome::kAWins : arena::Outcome::kBWins));
  }
  return votes;
}

}  // namespace testing
