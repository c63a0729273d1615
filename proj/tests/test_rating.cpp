#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "arena/error.hpp"
#include "arena/rating.hpp"
#include "support.hpp"
#include "votes.hpp"

using namespace arena;
using testing::make_vote;

namespace {

const std::vector<std::string> kThree{"A", "B", "C"};

std::vector<Vote> random_votes(std::size_t n, const std::vector<std::string>& models,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, models.size() - 1);
  std::uniform_int_distribution<int> outcome(0, 3);
  std::vector<Vote> votes;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    votes.push_back(make_vote(i, models[a], models[b], static_cast<Outcome>(outcome(rng))));
  }
  return votes;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("elo_update at equal ratings") {
  EloConfig cfg;
  const auto [a, b] = elo_update(1000, 1000, Outcome::kAWins, cfg);
  CHECK(a == 1016.0);
  CHECK(b == 984.0);
  const auto [c, d] = elo_update(1000, 1000, Outcome::kBothGood, cfg);
  CHECK(c == 1000.0);
  CHECK(d == 1000.0);
  const auto [e, f] = elo_update(1000, 1000, Outcome::kBWins, cfg);
  CHECK(e == 984.0);
  CHECK(f == 1016.0);
}

TEST_CASE("elo_update follows the logistic formula") {
  EloConfig cfg;
  const double ea = 1.0 / (1.0 + std::pow(10.0, (1200.0 - 1000.0) / 400.0));
  const auto [a, b] = elo_update(1000, 1200, Outcome::kAWins, cfg);
  CHECK(a == doctest::Approx(1000 + 32 * (1 - ea)).epsilon(1e-14));
  CHECK(b == doctest::Approx(1200 - 32 * (1 - ea)).epsilon(1e-14));
}

TEST_CASE("elo_sequential basics") {
  EloConfig cfg;
  auto r = elo_sequential({}, kThree, cfg);
  for (const auto& m : kThree) CHECK(r[m] == 1000.0);

  const std::vector<Vote> one{make_vote(0, "A", "B", Outcome::kAWins)};
  r = elo_sequential(one, kThree, cfg);
  CHECK(r["A"] == 1016.0);
  CHECK(r["B"] == 984.0);
  CHECK(r["C"] == 1000.0);

  const std::vector<Vote> neither{make_vote(0, "A", "B", Outcome::kNeither)};
  r = elo_sequential(neither, kThree, cfg);
  CHECK(r["A"] == 1000.0);

  const std::vector<Vote> stranger{make_vote(0, "A", "Z", Outcome::kAWins)};
  try {
    elo_sequential(stranger, kThree, cfg);
    FAIL("expected unknown model");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownModel);
  }
}

TEST_CASE("ratings are conserved over 10,000 random votes") {
  const std::vector<std::string> five{"m1", "m2", "m3", "m4", "m5"};
  const auto votes = random_votes(10000, five, 3);
  const auto r = elo_sequential(votes, five, EloConfig{});
  double sum = 0.0;
  for (const auto& [_, v] : r) sum += v;
  CHECK(std::abs(sum - 5000.0) <= 1e-9);
}

TEST_CASE("EloConfig validation") {
  EloConfig cfg;
  cfg.k_factor = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.permutations = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.ci_level = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("a single permutation equals the sequential replay of that order") {
  const auto votes = random_votes(400, kThree, 8);
  EloConfig cfg;
  cfg.permutations = 1;
  cfg.rng_seed = 1234;
  const auto perm = elo_permuted(votes, kThree, cfg);
  const auto order = permutation_order(votes.size(), cfg.rng_seed, 0);
  std::vector<Vote> shuffled;
  for (auto i : order) shuffled.push_back(votes[i]);
  const auto seq = elo_sequential(shuffled, kThree, cfg);
  for (const auto& m : kThree) {
    CHECK(perm.at(m).mean == seq.at(m));
    CHECK(perm.at(m).ci_low == seq.at(m));
    CHECK(perm.at(m).ci_high == seq.at(m));
  }
}

TEST_CASE("permutation_order is a permutation and depends on seed and index") {
  const auto a = permutation_order(50, 1, 0);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(50);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);
  CHECK(a == permutation_order(50, 1, 0));
  CHECK(a != permutation_order(50, 1, 1));
  CHECK(a != permutation_order(50, 2, 0));
}

TEST_CASE("same seed and votes give bit-identical reports regardless of threads") {
  const auto votes = random_votes(500, kThree, 21);
  EloConfig cfg;
  cfg.permutations = 200;
  cfg.rng_seed = 5;
  const auto one = rate(votes, kThree, cfg, 1);
  const auto again = rate(votes, kThree, cfg, 1);
  const auto many = rate(votes, kThree, cfg, 4);
  for (std::size_t i = 0; i < kThree.size(); ++i) {
    CHECK(one.rows[i].elo_mean == again.rows[i].elo_mean);
    CHECK(one.rows[i].elo_mean == many.rows[i].elo_mean);
    CHECK(one.rows[i].ci_low == many.rows[i].ci_low);
    CHECK(one.rows[i].ci_high == many.rows[i].ci_high);
  }
}

TEST_CASE("a model winning every matchup separates from the rest") {
  std::vector<Vote> votes;
  std::mt19937_64 rng(4);
  for (std::size_t i = 0; i < 300; ++i) {
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0) votes.push_back(make_vote(i, "A", "B", Outcome::kAWins));
    if (kind == 1) votes.push_back(make_vote(i, "C", "A", Outcome::kBWins));
    if (kind == 2) {
      votes.push_back(make_vote(i, "B", "C", rng() % 2 ? Outcome::kAWins : Outcome::kBWins));
    }
  }
  EloConfig cfg;
  cfg.rng_seed = 11;
  const auto iv = elo_permuted(votes, kThree, cfg);
  CHECK(iv.at("A").ci_low > iv.at("B").ci_high);
  CHECK(iv.at("A").ci_low > iv.at("C").ci_high);
}

TEST_CASE("interval brackets the mean") {
  const auto votes = random_votes(300, kThree, 9);
  EloConfig cfg;
  cfg.permutations = 300;
  for (const auto& [m, iv] : elo_permuted(votes, kThree, cfg)) {
    CHECK(iv.ci_low <= iv.mean);
    CHECK(iv.mean <= iv.ci_high);
  }
}

TEST_CASE("nearest-rank quantile") {
  std::vector<double> s(1000);
  std::iota(s.begin(), s.end(), 1.0);
  CHECK(nearest_rank_quantile(s, 0.025) == 25.0);
  CHECK(nearest_rank_quantile(s, 0.975) == 975.0);
  CHECK(nearest_rank_quantile(s, 0.0) == 1.0);
  CHECK(nearest_rank_quantile(s, 1.0) == 1000.0);
  const std::vector<double> one{7.0};
  CHECK(nearest_rank_quantile(one, 0.5) == 7.0);
}

TEST_CASE("winpct") {
  std::vector<Vote> votes;
  std::size_t n = 0;
  for (int i = 0; i < 5; ++i) votes.push_back(make_vote(n++, "A", "B", Outcome::kAWins));
  for (int i = 0; i < 2; ++i) votes.push_back(make_vote(n++, "B", "A", Outcome::kBothGood));
  for (int i = 0; i < 2; ++i) votes.push_back(make_vote(n++, "A", "C", Outcome::kBWins));
  votes.push_back(make_vote(n++, "C", "A", Outcome::kNeither));
  const auto c = win_counts(votes, "A");
  CHECK(c.win == 5);
  CHECK(c.both == 2);
  CHECK(c.total == 10);
  CHECK(winpct(votes, "A") == 0.7);
  CHECK(winpct(votes, "D") == 0.0);

  const std::vector<Vote> draws{make_vote(0, "A", "B", Outcome::kBothGood),
                                make_vote(1, "B", "A", Outcome::kBothGood)};
  CHECK(winpct(draws, "A") == 1.0);
  CHECK(winpct(draws, "B") == 1.0);
}

TEST_CASE("winpct is invariant under shuffles of the log") {
  auto votes = random_votes(250, kThree, 31);
  std::map<std::string, double> base;
  for (const auto& m : kThree) base[m] = winpct(votes, m);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    std::shuffle(votes.begin(), votes.end(), rng);
    for (const auto& m : kThree) CHECK(winpct(votes, m) == base[m]);
  }
}

TEST_CASE("rate combines everything in model order") {
  const std::vector<Vote> one{make_vote(0, "B", "A", Outcome::kAWins)};
  EloConfig cfg;
  cfg.permutations = 10;
  const auto report = rate(one, kThree, cfg);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.permutations == 10);
  CHECK(report.rows[0].model == "A");
  CHECK(report.find("B")->elo_sequential == 1016.0);
  CHECK(report.find("B")->elo_mean == 1016.0);
  CHECK(report.find("A")->winpct == 0.0);
  CHECK(report.find("C")->vote_count == 0);
}

TEST_CASE("vote log files round trip and enforce their invariants") {
  testing::TempDir dir;
  auto votes = random_votes(20, kThree, 2);
  save_votes(votes, dir / "votes.log");
  CHECK(load_votes(dir / "votes.log") == votes);

  auto dup = votes;
  dup[3].vote_id = dup[2].vote_id;
  save_votes(dup, dir / "dup.log");
  CHECK_THROWS_AS(load_votes(dir / "dup.log"), Error);

  auto self = votes;
  self[0].model_b = self[0].model_a;
  save_votes(self, dir / "self.log");
  CHECK_THROWS_AS(load_votes(dir / "self.log"), Error);

  auto back = votes;
  std::swap(back[4].timestamp, back[5].timestamp);
  save_votes(back, dir / "back.log");
  CHECK_THROWS_AS(load_votes(dir / "back.log"), Error);
}

TEST_CASE("timestamps parse and format") {
  const auto t = parse_timestamp("2024-05-01T12:00:00Z");
  REQUIRE(t.has_value());
  CHECK(format_timestamp(*t) == "2024-05-01T12:00:00.000Z");
  const auto frac = parse_timestamp("2024-05-01T12:00:00.250Z");
  REQUIRE(frac.has_value());
  CHECK((*frac - *t).count() == 250);
  CHECK_FALSE(parse_timestamp("2024-05-01 12:00:00").has_value());
  CHECK_FALSE(parse_timestamp("2024-13-01T12:00:00Z").has_value());
}

// Does not hold for Elo with a constant K-factor; expected to fail.
TEST_CASE("elo_mean is stable across disjoint seeds on 1000+ votes" * doctest::should_fail()) {
  const auto votes = testing::bradley_terry_votes(kThree, {3.0, 1.0, 0.5}, 2000, 77);
  EloConfig a, b;
  a.rng_seed = 1;
  b.rng_seed = 2;
  const auto ra = elo_permuted(votes, kThree, a);
  const auto rb = elo_permuted(votes, kThree, b);
  for (const auto& m : kThree) CHECK(std::abs(ra.at(m).mean - rb.at(m).mean) < 1.0);
}

// Does not hold for Elo with a constant K-factor; expected to fail.
TEST_CASE("median interval width shrinks as the log grows" * doctest::should_fail()) {
  std::vector<double> widths;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto votes = testing::bradley_terry_votes(kThree, {3.0, 1.0, 0.5}, n, 40);
    EloConfig cfg;
    cfg.permutations = 200;
    std::vector<double> w;
    for (const auto& [_, iv] : elo_permuted(votes, kThree, cfg)) w.push_back(iv.ci_high - iv.ci_low);
    widths.push_back(median(w));
  }
  MESSAGE("median widths: " << widths[0] << " " << widths[1] << " " << widths[2]);
  CHECK(widths[0] > widths[1]);
  CHECK(widths[1] > widths[2]);
}

TEST_CASE("seed-to-seed spread of elo_mean is within Monte Carlo error") {
  const auto votes = testing::bradley_terry_votes(kThree, {3.0, 1.0, 0.5}, 2000, 77);
  EloConfig a, b;
  a.rng_seed = 1;
  b.rng_seed = 2;
  const auto ra = elo_permuted(votes, kThree, a);
  const auto rb = elo_permuted(votes, kThree, b);
  for (const auto& m : kThree) {
    // Normal approximation: the 95% interval spans about 3.92 standard deviations.
    const double sd = (ra.at(m).ci_high - ra.at(m).ci_low) / 3.92;
    const double se_diff = sd * std::sqrt(2.0 / static_cast<double>(a.permutations));
    CHECK(std::abs(ra.at(m).mean - rb.at(m).mean) < 4.0 * se_diff);
  }
}
