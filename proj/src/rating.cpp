#include "arena/rating.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "arena/error.hpp"
#include "arena/parallel.hpp"

namespace arena {

namespace {

// Compact form of a decisive-or-drawn vote for the replay loops.
struct Game {
  std::uint32_t a;
  std::uint32_t b;
  double score_a;
};

double score_for(Outcome o) {
  switch (o) {
    case Outcome::kAWins: return 1.0;
    case Outcome::kBWins: return 0.0;
    case Outcome::kBothGood: return 0.5;
    case Outcome::kNeither: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "NEITHER votes do not enter Elo");
}

std::vector<Game> compile_games(std::span<const Vote> votes,
                                std::span<const std::string> models) {
  std::unordered_map<std::string_view, std::uint32_t> index;
  for (std::size_t i = 0; i < models.size(); ++i) {
    index.emplace(models[i], static_cast<std::uint32_t>(i));
  }
  auto lookup = [&](const std::string& m) {
    auto it = index.find(m);
    if (it == index.end()) {
      throw Error(ErrorCode::kUnknownModel, "vote names unregistered model '" + m + "'");
    }
    return it->second;
  };
  std::vector<Game> games;
  games.reserve(votes.size());
  for (const auto& v : votes) {
    const auto a = lookup(v.model_a);
    const auto b = lookup(v.model_b);
    if (v.outcome == Outcome::kNeither) continue;
    games.push_back({a, b, score_for(v.outcome)});
  }
  return games;
}

void replay(std::span<const Game> games, const EloConfig& cfg,
            std::vector<double>& ratings) {
  for (const auto& g : games) {
    const double e_a = expected_score(ratings[g.a], ratings[g.b], cfg.scale);
    const double delta = cfg.k_factor * (g.score_a - e_a);
    ratings[g.a] += delta;
    ratings[g.b] -= delta;
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Unbiased draw from [0, bound) (Lemire's multiply-and-reject).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, std::uint64_t seed, std::size_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
  std::mt19937_64 rng(splitmix64(state));
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[bounded(rng, i)]);
  }
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kAWins: return "A_WINS";
    case Outcome::kBWins: return "B_WINS";
    case Outcome::kBothGood: return "BOTH_GOOD";
    case Outcome::kNeither: return "NEITHER";
  }
  return "NEITHER";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  if (s == "A_WINS") return Outcome::kAWins;
  if (s == "B_WINS") return Outcome::kBWins;
  if (s == "BOTH_GOOD") return Outcome::kBothGood;
  if (s == "NEITHER") return Outcome::kNeither;
  return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  int y, mo, d, h, mi, sec, consumed = 0;
  std::string buf(s);
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi,
                  &sec, &consumed) != 6) {
    return std::nullopt;
  }
  std::string_view rest = s.substr(static_cast<std::size_t>(consumed));
  int millis = 0;
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    int digits = 0;
    while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') {
      if (digits < 3) millis = millis * 10 + (rest.front() - '0');
      ++digits;
      rest.remove_prefix(1);
    }
    if (digits == 0) return std::nullopt;
    for (int k = digits; k < 3; ++k) millis *= 10;
  }
  if (rest != "Z") return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return time_point_cast<milliseconds>(sys_days{ymd}) + hours{h} + minutes{mi} +
         seconds{sec} + milliseconds{millis};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  auto rem = t - day_point;
  const auto h = duration_cast<hours>(rem);
  rem -= h;
  const auto mi = duration_cast<minutes>(rem);
  rem -= mi;
  const auto s = duration_cast<seconds>(rem);
  rem -= s;
  char out[40];
  std::snprintf(out, sizeof out, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                static_cast<int>(mi.count()), static_cast<int>(s.count()),
                static_cast<int>(rem.count()));
  return out;
}

Json vote_to_json(const Vote& v) {
  return Json{{"vote_id", v.vote_id},
              {"record_id", v.record_id},
              {"model_a", v.model_a},
              {"model_b", v.model_b},
              {"outcome", outcome_name(v.outcome)},
              {"judge_id", v.judge_id},
              {"timestamp", format_timestamp(v.timestamp)}};
}

Vote vote_from_json(const Json& obj, std::size_t line) {
  const std::string at = "line " + std::to_string(line) + ": ";
  Vote v;
  v.vote_id = required_string(obj, "vote_id", line);
  v.record_id = required_string(obj, "record_id", line);
  v.model_a = required_string(obj, "model_a", line);
  v.model_b = required_string(obj, "model_b", line);
  v.judge_id = required_string(obj, "judge_id", line);
  const auto outcome = parse_outcome(required_string(obj, "outcome", line));
  if (!outcome) throw Error(ErrorCode::kParse, at + "unknown outcome");
  v.outcome = *outcome;
  const auto ts = parse_timestamp(required_string(obj, "timestamp", line));
  if (!ts) throw Error(ErrorCode::kParse, at + "timestamp is not ISO-8601 UTC");
  v.timestamp = *ts;
  if (v.vote_id.empty() || v.model_a.empty() || v.model_b.empty()) {
    throw Error(ErrorCode::kParse, at + "empty vote_id or model name");
  }
  if (v.model_a == v.model_b) {
    throw Error(ErrorCode::kParse, at + "model_a equals model_b");
  }
  return v;
}

std::vector<Vote> load_votes(const std::filesystem::path& path) {
  std::vector<Vote> votes;
  std::unordered_set<std::string> ids;
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    Vote v = vote_from_json(obj, line);
    if (!votes.empty() && v.timestamp < votes.back().timestamp) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line) + ": timestamp goes backwards");
    }
    if (!ids.insert(v.vote_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line) + ": duplicate vote_id '" +
                      v.vote_id + "'");
    }
    votes.push_back(std::move(v));
  });
  return votes;
}

void save_votes(std::span<const Vote> votes, const std::filesystem::path& path) {
  std::string out;
  for (const auto& v : votes) {
    out += vote_to_json(v).dump();
    out += '\n';
  }
  write_file_atomically(path, out);
}

std::vector<std::string> models_in(std::span<const Vote> votes) {
  std::set<std::string> names;
  for (const auto& v : votes) {
    names.insert(v.model_a);
    names.insert(v.model_b);
  }
  return {names.begin(), names.end()};
}

void EloConfig::validate() const {
  if (!std::isfinite(initial_rating)) {
    throw Error(ErrorCode::kInvalidArgument, "initial_rating must be finite");
  }
  if (!(k_factor > 0.0) || !std::isfinite(k_factor)) {
    throw Error(ErrorCode::kInvalidArgument, "k_factor must be positive");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  }
  if (permutations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "permutations must be >= 1");
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ci_level must lie in (0,1)");
  }
}

double expected_score(double r_a, double r_b, double scale) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / scale));
}

std::pair<double, double> elo_update(double r_a, double r_b, Outcome outcome,
                                     const EloConfig& cfg) {
  const double delta = cfg.k_factor * (score_for(outcome) - expected_score(r_a, r_b, cfg.scale));
  return {r_a + delta, r_b - delta};
}

Ratings elo_sequential(std::span<const Vote> votes,
                       std::span<const std::string> models,
                       const EloConfig& cfg) {
  cfg.validate();
  const auto games = compile_games(votes, models);
  std::vector<double> ratings(models.size(), cfg.initial_rating);
  replay(games, cfg, ratings);
  Ratings out;
  for (std::size_t i = 0; i < models.size(); ++i) out[models[i]] = ratings[i];
  return out;
}

std::vector<std::size_t> permutation_order(std::size_t n, std::uint64_t seed,
                                           std::size_t index) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle_in_place(order, seed, index);
  return order;
}

double nearest_rank_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sample");
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::map<std::string, EloInterval> elo_permuted(std::span<const Vote> votes,
                                                std::span<const std::string> models,
                                                const EloConfig& cfg,
                                                std::size_t jobs) {
  cfg.validate();
  // Permutation i replays permutation_order(votes.size(), seed, i).
  std::vector<Game> all;
  all.reserve(votes.size());
  {
    std::unordered_map<std::string_view, std::uint32_t> index;
    for (std::size_t i = 0; i < models.size(); ++i) {
      index.emplace(models[i], static_cast<std::uint32_t>(i));
    }
    for (const auto& v : votes) {
      auto a = index.find(v.model_a), b = index.find(v.model_b);
      if (a == index.end() || b == index.end()) {
        const auto& m = a == index.end() ? v.model_a : v.model_b;
        throw Error(ErrorCode::kUnknownModel, "vote names unregistered model '" + m + "'");
      }
      // NEITHER stays in the shuffle as a negative score.
      all.push_back({a->second, b->second,
                     v.outcome == Outcome::kNeither ? -1.0 : score_for(v.outcome)});
    }
  }

  const std::size_t m = models.size();
  const std::size_t perms = cfg.permutations;
  std::vector<double> finals(perms * m);
  parallel_for(perms, jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<Game> order;
    std::vector<Game> games;
    std::vector<double> ratings(m);
    for (std::size_t p = begin; p < end; ++p) {
      order = all;
      shuffle_in_place(order, cfg.rng_seed, p);
      games.clear();
      for (const auto& g : order) {
        if (g.score_a >= 0.0) games.push_back(g);
      }
      std::fill(ratings.begin(), ratings.end(), cfg.initial_rating);
      replay(games, cfg, ratings);
      std::copy(ratings.begin(), ratings.end(), finals.begin() + static_cast<std::ptrdiff_t>(p * m));
    }
  });

  const double tail = (1.0 - cfg.ci_level) / 2.0;
  std::map<std::string, EloInterval> out;
  std::vector<double> sample(perms);
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t p = 0; p < perms; ++p) {
      sample[p] = finals[p * m + i];
      sum += sample[p];
    }
    std::sort(sample.begin(), sample.end());
    EloInterval iv;
    iv.mean = sum / static_cast<double>(perms);
    iv.ci_low = nearest_rank_quantile(sample, tail);
    iv.ci_high = nearest_rank_quantile(sample, 1.0 - tail);
    out[models[i]] = iv;
  }
  return out;
}

WinCounts win_counts(std::span<const Vote> votes, std::string_view model) {
  WinCounts c;
  for (const auto& v : votes) {
    const bool is_a = v.model_a == model;
    const bool is_b = v.model_b == model;
    if (!is_a && !is_b) continue;
    ++c.total;
    if ((is_a && v.outcome == Outcome::kAWins) ||
        (is_b && v.outcome == Outcome::kBWins)) {
      ++c.win;
    } else if (v.outcome == Outcome::kBothGood) {
      ++c.both;
    }
  }
  return c;
}

double winpct(std::span<const Vote> votes, std::string_view model) {
  const WinCounts c = win_counts(votes, model);
  if (c.total == 0) return 0.0;
  return static_cast<double>(c.win + c.both) / static_cast<double>(c.total);
}

const RatingRow* RatingReport::find(std::string_view model) const {
  for (const auto& r : rows) {
    if (r.model == model) return &r;
  }
  return nullptr;
}

RatingReport rate(std::span<const Vote> votes, std::span<const std::string> models,
                  const EloConfig& cfg, std::size_t jobs) {
  const Ratings seq = elo_sequential(votes, models, cfg);
  const auto perm = elo_permuted(votes, models, cfg, jobs);
  RatingReport report;
  report.permutations = cfg.permutations;
  for (const auto& m : models) {
    RatingRow row;
    row.model = m;
    row.elo_sequential = seq.at(m);
    const auto& iv = perm.at(m);
    row.elo_mean = iv.mean;
    row.ci_low = iv.ci_low;
    row.ci_high = iv.ci_high;
    const WinCounts c = win_counts(votes, m);
    row.winpct = c.total == 0 ? 0.0 : static_cast<double>(c.win + c.both) / static_cast<double>(c.total);
    row.vote_count = c.total;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace arena
