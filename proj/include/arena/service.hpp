#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arena/analysis.hpp"
#include "arena/corpus.hpp"
#include "arena/jsonl.hpp"
#include "arena/rating.hpp"

namespace arena {

// What a judge picks on the voting screen.
enum class Side { kLeft, kRight, kBothGood, kNeither };

std::string_view side_name(Side s);
std::optional<Side> parse_side(std::string_view s);

enum class SchedulerPolicy {
  // Least-issued model pair first, then the least-issued record of that pair;
  // ties broken uniformly at random.
  kBalanced,
  // Any pair with a common record, any common record, uniformly.
  kUniform,
};

std::optional<SchedulerPolicy> parse_scheduler(std::string_view s);

// Append-only vote log. Opening replays the file; a torn final line (no
// trailing newline, unparsable) is an unacknowledged write and is cut off.
// `append` returns only after the line is flushed and fsync'ed.
class VoteLog {
 public:
  explicit VoteLog(std::filesystem::path path);
  ~VoteLog();
  VoteLog(const VoteLog&) = delete;
  VoteLog& operator=(const VoteLog&) = delete;

  const std::vector<Vote>& votes() const { return votes_; }
  void append(const Vote& vote);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<Vote> votes_;
  int fd_ = -1;
};

struct ServiceConfig {
  SchedulerPolicy policy = SchedulerPolicy::kBalanced;
  // Permutations used for the live leaderboard; offline reports use the full
  // EloConfig::permutations.
  std::size_t live_permutations = 200;
  EloConfig elo;
  // Fixes scheduling and match-id generation; random_device when unset.
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
  // Test hook: runs after a vote is durably appended, before the matchup is
  // marked resolved and acknowledged. Throwing from it simulates a crash.
  std::function<void()> after_append;
};

// Client-facing matchup. Carries no model identity.
struct MatchPayload {
  std::string match_id;
  std::string instruction;
  std::string category;
  std::string response_left;
  std::string response_right;

  Json to_json() const;
};

struct VoteAck {
  std::string match_id;
  std::string vote_id;
};

struct JudgeSession {
  std::string judge_id;
  std::size_t votes_cast = 0;
};

struct LeaderboardSnapshot {
  std::size_t version = 0;  // number of votes in the log
  RatingReport ratings;
  CategoryBreakdown categories;
  std::vector<JudgeSession> judges;

  Json to_json() const;
};

class ArenaService {
 public:
  // Models are the response sets' model names; the vote log at `log_path` is
  // created if absent and replayed otherwise.
  ArenaService(EvalDataset dataset, std::vector<ResponseSet> sets,
               const std::filesystem::path& log_path, ServiceConfig cfg = {});

  // Throws kInsufficientModels with fewer than two models and kNoCommonRecord
  // when no two models answered a common record.
  MatchPayload next_matchup(const std::string& judge_id);

  // Throws kUnknownMatch, kAlreadyResolved or kJudgeMismatch.
  VoteAck submit_vote(const std::string& match_id, Side side,
                      const std::string& judge_id);

  // Cached per log version; concurrent callers share one snapshot object.
  std::shared_ptr<const LeaderboardSnapshot> leaderboard();

  std::vector<std::string> categories() const;
  const std::vector<std::string>& models() const { return models_; }
  std::vector<Vote> votes() const;
  std::vector<JudgeSession> judges() const;

  // Issued matchups per unordered model pair (names in sorted order),
  // including those rebuilt from the log on startup.
  std::map<std::pair<std::string, std::string>, std::size_t> pair_counts() const;

  // Number of times `model` was shown on the left.
  std::size_t left_count(const std::string& model) const;

 private:
  struct Matchup {
    std::string match_id;
    std::size_t record = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t pair = 0;
    std::string judge_id;
    Timestamp issued_at{};
    bool resolved = false;
  };
  struct PairInfo {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::size_t> records;       // indices into dataset_.records()
    std::vector<std::size_t> record_counts;  // parallel to `records`
    std::size_t issued = 0;
  };

  void count_issue(std::size_t pair, std::size_t slot);
  std::pair<std::size_t, std::size_t> pick(std::size_t* slot);
  std::string fresh_match_id();
  std::size_t pick_min(const std::vector<std::size_t>& counts,
                       const std::vector<std::size_t>& candidates);

  EvalDataset dataset_;
  std::vector<ResponseSet> sets_;
  std::vector<std::string> models_;
  ServiceConfig cfg_;

  mutable std::mutex mu_;  // single writer: scheduling, log appends
  VoteLog log_;
  std::vector<PairInfo> pairs_;
  std::unordered_map<std::string, Matchup> pending_;
  std::set<std::string> resolved_ids_;
  std::map<std::string, std::size_t> judge_votes_;
  std::vector<std::size_t> left_counts_;
  std::mt19937_64 rng_;

  std::mutex snapshot_mu_;
  std::shared_ptr<const LeaderboardSnapshot> snapshot_;
};

}  // namespace arena
