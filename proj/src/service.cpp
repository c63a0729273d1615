#include "arena/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <unordered_set>

#include "arena/error.hpp"
#include "arena/tables.hpp"

namespace arena {

namespace {

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

}  // namespace

std::string_view side_name(Side s) {
  switch (s) {
    case Side::kLeft: return "LEFT";
    case Side::kRight: return "RIGHT";
    case Side::kBothGood: return "BOTH_GOOD";
    case Side::kNeither: return "NEITHER";
  }
  return "NEITHER";
}

std::optional<Side> parse_side(std::string_view s) {
  if (s == "LEFT") return Side::kLeft;
  if (s == "RIGHT") return Side::kRight;
  if (s == "BOTH_GOOD") return Side::kBothGood;
  if (s == "NEITHER") return Side::kNeither;
  return std::nullopt;
}

std::optional<SchedulerPolicy> parse_scheduler(std::string_view s) {
  if (s == "balanced") return SchedulerPolicy::kBalanced;
  if (s == "uniform") return SchedulerPolicy::kUniform;
  return std::nullopt;
}

VoteLog::VoteLog(std::filesystem::path path) : path_(std::move(path)) {
  std::string content;
  if (std::filesystem::exists(path_)) content = read_file(path_);

  std::size_t pos = 0, line_no = 0, committed = 0;
  std::unordered_set<std::string> ids;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string line =
        content.substr(pos, complete ? nl - pos : std::string::npos);
    ++line_no;
    if (!trim(line).empty()) {
      Vote v;
      try {
        v = vote_from_json(Json::parse(line), line_no);
      } catch (const std::exception& e) {
        // Only the unterminated tail may be damaged.
        if (!complete) break;
        throw Error(ErrorCode::kParse,
                    path_.string() + ": corrupt vote log line " + std::to_string(line_no));
      }
      if (!votes_.empty() && v.timestamp < votes_.back().timestamp) {
        throw Error(ErrorCode::kParse, path_.string() + ": line " +
                                           std::to_string(line_no) +
                                           ": timestamp goes backwards");
      }
      if (!ids.insert(v.vote_id).second) {
        throw Error(ErrorCode::kDuplicateId,
                    path_.string() + ": duplicate vote_id '" + v.vote_id + "'");
      }
      votes_.push_back(std::move(v));
    }
    if (!complete) {
      committed = content.size();
      break;
    }
    pos = nl + 1;
    committed = pos;
  }

  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot open vote log " + path_.string() + ": " +
                                    std::strerror(errno));
  }
  if (::ftruncate(fd_, static_cast<off_t>(committed)) != 0 ||
      ::lseek(fd_, 0, SEEK_END) < 0) {
    throw Error(ErrorCode::kIo, "cannot repair vote log " + path_.string());
  }
  // A last record that parsed but lacked its newline gets one now.
  if (committed > 0 && content[committed - 1] != '\n') {
    if (::write(fd_, "\n", 1) != 1 || ::fsync(fd_) != 0) {
      throw Error(ErrorCode::kIo, "cannot repair vote log " + path_.string());
    }
  }
}

VoteLog::~VoteLog() {
  if (fd_ >= 0) ::close(fd_);
}

void VoteLog::append(const Vote& vote) {
  const std::string line = vote_to_json(vote).dump() + "\n";
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "vote log append failed: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw Error(ErrorCode::kIo, "vote log fsync failed: " + std::string(std::strerror(errno)));
  }
  votes_.push_back(vote);
}

Json MatchPayload::to_json() const {
  return Json{{"match_id", match_id},
              {"instruction", instruction},
              {"category", category},
              {"response_left", response_left},
              {"response_right", response_right}};
}

Json LeaderboardSnapshot::to_json() const {
  Json models = Json::array();
  for (const auto& r : ratings.rows) {
    models.push_back({{"model", r.model},
                      {"elo_sequential", r.elo_sequential},
                      {"elo_mean", r.elo_mean},
                      {"ci_low", r.ci_low},
                      {"ci_high", r.ci_high},
                      {"winpct", r.winpct},
                      {"vote_count", r.vote_count}});
  }
  Json cells = Json::array();
  for (const auto& c : categories.cells) {
    cells.push_back({{"model", c.model},
                     {"category", c.category},
                     {"winpct", c.winpct},
                     {"vote_count", c.vote_count}});
  }
  Json js = Json::array();
  for (const auto& j : judges) js.push_back({{"judge_id", j.judge_id}, {"votes_cast", j.votes_cast}});
  return Json{{"version", version},
              {"permutations", ratings.permutations},
              {"models", models},
              {"categories", cells},
              {"judges", js}};
}

ArenaService::ArenaService(EvalDataset dataset, std::vector<ResponseSet> sets,
                           const std::filesystem::path& log_path, ServiceConfig cfg)
    : dataset_(std::move(dataset)),
      sets_(std::move(sets)),
      cfg_(std::move(cfg)),
      log_(log_path) {
  cfg_.elo.validate();
  if (cfg_.live_permutations == 0) {
    throw Error(ErrorCode::kInvalidArgument, "live permutation count must be >= 1");
  }
  rng_.seed(cfg_.seed ? *cfg_.seed : std::random_device{}());

  std::map<std::string, std::size_t> model_index;
  for (const auto& s : sets_) {
    if (!model_index.emplace(s.model_name, models_.size()).second) {
      throw Error(ErrorCode::kDuplicateId, "model '" + s.model_name + "' registered twice");
    }
    models_.push_back(s.model_name);
  }
  left_counts_.assign(models_.size(), 0);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_index;
  for (std::size_t a = 0; a < sets_.size(); ++a) {
    for (std::size_t b = a + 1; b < sets_.size(); ++b) {
      PairInfo p;
      p.a = a;
      p.b = b;
      for (std::size_t r = 0; r < dataset_.size(); ++r) {
        const auto& id = dataset_.records()[r].id;
        const std::string* ra = sets_[a].response_for(id);
        const std::string* rb = sets_[b].response_for(id);
        if (ra && rb && !trim(*ra).empty() && !trim(*rb).empty()) {
          p.records.push_back(r);
        }
      }
      p.record_counts.assign(p.records.size(), 0);
      pair_index[{a, b}] = pairs_.size();
      pairs_.push_back(std::move(p));
    }
  }

  for (const auto& v : log_.votes()) {
    auto ia = model_index.find(v.model_a), ib = model_index.find(v.model_b);
    if (ia == model_index.end() || ib == model_index.end()) {
      throw Error(ErrorCode::kUnknownModel, "vote log names a model with no response set");
    }
    resolved_ids_.insert(v.vote_id);
    ++judge_votes_[v.judge_id];
    const auto key = std::minmax(ia->second, ib->second);
    const std::size_t p = pair_index.at({key.first, key.second});
    std::size_t slot = pairs_[p].records.size();
    for (std::size_t k = 0; k < pairs_[p].records.size(); ++k) {
      if (dataset_.records()[pairs_[p].records[k]].id == v.record_id) slot = k;
    }
    count_issue(p, slot);
  }
}

void ArenaService::count_issue(std::size_t pair, std::size_t slot) {
  ++pairs_[pair].issued;
  if (slot < pairs_[pair].record_counts.size()) ++pairs_[pair].record_counts[slot];
}

std::size_t ArenaService::pick_min(const std::vector<std::size_t>& counts,
                                   const std::vector<std::size_t>& candidates) {
  std::size_t best = SIZE_MAX;
  for (std::size_t c : candidates) best = std::min(best, counts[c]);
  std::vector<std::size_t> tied;
  for (std::size_t c : candidates) {
    if (counts[c] == best) tied.push_back(c);
  }
  return tied[std::uniform_int_distribution<std::size_t>(0, tied.size() - 1)(rng_)];
}

std::pair<std::size_t, std::size_t> ArenaService::pick(std::size_t* slot) {
  std::vector<std::size_t> eligible;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    if (!pairs_[p].records.empty()) eligible.push_back(p);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kNoCommonRecord, "no two models answered a common record");
  }
  std::size_t pair = 0;
  if (cfg_.policy == SchedulerPolicy::kBalanced) {
    std::vector<std::size_t> issued(pairs_.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p) issued[p] = pairs_[p].issued;
    pair = pick_min(issued, eligible);
    const auto& info = pairs_[pair];
    std::vector<std::size_t> all(info.records.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    *slot = pick_min(info.record_counts, all);
  } else {
    pair = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng_)];
    *slot = std::uniform_int_distribution<std::size_t>(0, pairs_[pair].records.size() - 1)(rng_);
  }
  return {pair, pairs_[pair].records[*slot]};
}

std::string ArenaService::fresh_match_id() {
  static constexpr char kHex[] = "0123456789abcdef";
  while (true) {
    std::string id;
    for (int w = 0; w < 2; ++w) {
      std::uint64_t x = rng_();
      for (int i = 0; i < 16; ++i, x >>= 4) id += kHex[x & 0xF];
    }
    if (!pending_.count(id) && !resolved_ids_.count(id)) return id;
  }
}

MatchPayload ArenaService::next_matchup(const std::string& judge_id) {
  if (trim(judge_id).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "judge id must not be empty");
  }
  std::lock_guard lock(mu_);
  if (models_.size() < 2) {
    throw Error(ErrorCode::kInsufficientModels, "at least two models are required");
  }
  std::size_t slot = 0;
  const auto [pair, record] = pick(&slot);
  count_issue(pair, slot);

  Matchup m;
  m.match_id = fresh_match_id();
  m.record = record;
  m.pair = pair;
  m.left = pairs_[pair].a;
  m.right = pairs_[pair].b;
  if (rng_() & 1) std::swap(m.left, m.right);
  ++left_counts_[m.left];
  m.judge_id = judge_id;
  m.issued_at = now_utc();

  const auto& rec = dataset_.records()[record];
  MatchPayload payload{m.match_id, rec.instruction, rec.category,
                       *sets_[m.left].response_for(rec.id),
                       *sets_[m.right].response_for(rec.id)};
  pending_.emplace(m.match_id, std::move(m));
  return payload;
}

VoteAck ArenaService::submit_vote(const std::string& match_id, Side side,
                                  const std::string& judge_id) {
  std::lock_guard lock(mu_);
  if (resolved_ids_.count(match_id)) {
    throw Error(ErrorCode::kAlreadyResolved, "match already resolved");
  }
  auto it = pending_.find(match_id);
  if (it == pending_.end()) throw Error(ErrorCode::kUnknownMatch, "unknown match id");
  Matchup& m = it->second;
  if (m.judge_id != judge_id) {
    throw Error(ErrorCode::kJudgeMismatch, "match was issued to another judge");
  }

  Vote v;
  v.vote_id = m.match_id;
  v.record_id = dataset_.records()[m.record].id;
  v.model_a = models_[m.left];
  v.model_b = models_[m.right];
  switch (side) {
    case Side::kLeft: v.outcome = Outcome::kAWins; break;
    case Side::kRight: v.outcome = Outcome::kBWins; break;
    case Side::kBothGood: v.outcome = Outcome::kBothGood; break;
    case Side::kNeither: v.outcome = Outcome::kNeither; break;
  }
  v.judge_id = judge_id;
  v.timestamp = now_utc();
  if (!log_.votes().empty()) v.timestamp = std::max(v.timestamp, log_.votes().back().timestamp);

  log_.append(v);  // commit point
  if (cfg_.after_append) cfg_.after_append();

  resolved_ids_.insert(m.match_id);
  ++judge_votes_[judge_id];
  VoteAck ack{m.match_id, v.vote_id};
  pending_.erase(it);
  return ack;
}

std::shared_ptr<const LeaderboardSnapshot> ArenaService::leaderboard() {
  std::lock_guard snap_lock(snapshot_mu_);
  std::vector<Vote> votes;
  std::vector<JudgeSession> judges;
  {
    std::lock_guard lock(mu_);
    if (snapshot_ && snapshot_->version == log_.votes().size()) return snapshot_;
    votes = log_.votes();
    for (const auto& [id, n] : judge_votes_) judges.push_back({id, n});
  }
  auto snap = std::make_shared<LeaderboardSnapshot>();
  snap->version = votes.size();
  EloConfig elo = cfg_.elo;
  elo.permutations = cfg_.live_permutations;
  if (cfg_.seed) elo.rng_seed = *cfg_.seed;
  snap->ratings = rate(votes, models_, elo, cfg_.jobs);

  std::vector<Vote> categorized;
  for (const auto& v : votes) {
    const auto* r = dataset_.find(v.record_id);
    if (r != nullptr && !r->category.empty()) categorized.push_back(v);
  }
  snap->categories = category_winpct(categorized, dataset_);
  snap->judges = std::move(judges);
  snapshot_ = std::move(snap);
  return snapshot_;
}

std::vector<std::string> ArenaService::categories() const { return dataset_.categories(); }

std::vector<Vote> ArenaService::votes() const {
  std::lock_guard lock(mu_);
  return log_.votes();
}

std::vector<JudgeSession> ArenaService::judges() const {
  std::lock_guard lock(mu_);
  std::vector<JudgeSession> out;
  for (const auto& [id, n] : judge_votes_) out.push_back({id, n});
  return out;
}

std::map<std::pair<std::string, std::string>, std::size_t> ArenaService::pair_counts() const {
  std::lock_guard lock(mu_);
  std::map<std::pair<std::string, std::string>, std::size_t> out;
  for (const auto& p : pairs_) {
    auto names = std::minmax(models_[p.a], models_[p.b]);
    out[{names.first, names.second}] = p.issued;
  }
  return out;
}

std::size_t ArenaService::left_count(const std::string& model) const {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (models_[i] == model) return left_counts_[i];
  }
  return 0;
}

}  // namespace arena
