#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arena/jsonl.hpp"

namespace arena {

enum class Outcome { kAWins, kBWins, kBothGood, kNeither };

std::string_view outcome_name(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// "2024-05-01T12:00:00Z" or with fractional seconds ("...:00.250Z").
std::optional<Timestamp> parse_timestamp(std::string_view s);
std::string format_timestamp(Timestamp t);

struct Vote {
  std::string vote_id;
  std::string record_id;
  std::string model_a;
  std::string model_b;
  Outcome outcome = Outcome::kNeither;
  std::string judge_id;
  Timestamp timestamp{};

  friend bool operator==(const Vote&, const Vote&) = default;
};

Json vote_to_json(const Vote& v);
// Throws kParse describing the first invalid field.
Vote vote_from_json(const Json& obj, std::size_t line);

// Reads a vote log, enforcing distinct vote ids, model_a != model_b and
// non-decreasing timestamps.
std::vector<Vote> load_votes(const std::filesystem::path& path);
void save_votes(std::span<const Vote> votes, const std::filesystem::path& path);

// Distinct model names mentioned by the votes, sorted.
std::vector<std::string> models_in(std::span<const Vote> votes);

struct EloConfig {
  double initial_rating = 1000.0;
  double k_factor = 32.0;
  double scale = 400.0;
  std::size_t permutations = 1000;
  double ci_level = 0.95;
  std::uint64_t rng_seed = 0;

  // Throws kInvalidArgument on out-of-range values.
  void validate() const;
};

// Logistic expectation of A against B.
double expected_score(double r_a, double r_b, double scale);

// One zero-sum update. `outcome` must not be kNeither.
std::pair<double, double> elo_update(double r_a, double r_b, Outcome outcome,
                                     const EloConfig& cfg);

using Ratings = std::map<std::string, double>;

// Every model in `models` starts at cfg.initial_rating; votes are applied in
// order and kNeither votes are skipped. A vote naming a model outside
// `models` throws kUnknownModel.
Ratings elo_sequential(std::span<const Vote> votes,
                       std::span<const std::string> models,
                       const EloConfig& cfg);

// The vote order used by permutation `index` under `seed`: a Fisher-Yates
// shuffle of [0, n) driven by a generator seeded from (seed, index).
std::vector<std::size_t> permutation_order(std::size_t n, std::uint64_t seed,
                                           std::size_t index);

struct EloInterval {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Nearest-rank empirical quantile of an ascending-sorted, non-empty sample.
double nearest_rank_quantile(std::span<const double> sorted, double p);

// Replays cfg.permutations shuffled orders of `votes` and summarizes each
// model's final ratings by their mean and central cfg.ci_level interval.
// Permutations are spread over `jobs` threads (0 = hardware concurrency); the
// result does not depend on `jobs`.
std::map<std::string, EloInterval> elo_permuted(std::span<const Vote> votes,
                                                std::span<const std::string> models,
                                                const EloConfig& cfg,
                                                std::size_t jobs = 0);

struct WinCounts {
  std::size_t win = 0;
  std::size_t both = 0;
  std::size_t total = 0;
};

WinCounts win_counts(std::span<const Vote> votes, std::string_view model);

// (win + both) / total over the votes involving `model`; 0 when it has none.
double winpct(std::span<const Vote> votes, std::string_view model);

struct RatingRow {
  std::string model;
  double elo_sequential = 0.0;
  double elo_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double winpct = 0.0;
  std::size_t vote_count = 0;
};

struct RatingReport {
  std::size_t permutations = 0;
  std::vector<RatingRow> rows;  // in `models` order

  const RatingRow* find(std::string_view model) const;
};

RatingReport rate(std::span<const Vote> votes, std::span<const std::string> models,
                  const EloConfig& cfg, std::size_t jobs = 0);

}  // namespace arena
