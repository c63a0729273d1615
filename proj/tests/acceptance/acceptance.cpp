// Acceptance suite: one PASS/FAIL line per headline criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "arena/analysis.hpp"
#include "arena/corpus.hpp"
#include "arena/http_server.hpp"
#include "arena/metrics.hpp"
#include "arena/rating.hpp"
#include "arena/service.hpp"
#include "arena/tables.hpp"
#include "cli_runner.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "votes.hpp"

using namespace arena;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
  // Non-empty when the criterion is known to be unattainable as stated.
  std::string known_failure;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

Verdict rouge_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(0, 30);
  std::uniform_int_distribution<int> word(0, 9);
  auto tokens = [&] {
    TokenSequence t(len(rng));
    for (auto& w : t) w = "w" + std::to_string(word(rng));
    return t;
  };
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto c = tokens(), r = tokens();
    auto diff = [&](const RougeScore& got, const oracle::Prf& want) {
      worst = std::max({worst, std::abs(got.precision - want.p), std::abs(got.recall - want.r),
                        std::abs(got.f1 - want.f)});
    };
    diff(rouge_n(c, r, 1), oracle::rouge_n(c, r, 1));
    diff(rouge_n(c, r, 2), oracle::rouge_n(c, r, 2));
    diff(rouge_l(c, r), oracle::rouge_l(c, r));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 1.0,
          "max |diff| = " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

Verdict elo_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> models{"m1", "m2", "m3", "m4", "m5"};
  std::mt19937_64 rng(10);
  std::vector<Vote> votes;
  for (std::size_t i = 0; i < 10000; ++i) {
    std::size_t a = rng() % 5, b = rng() % 5;
    while (b == a) b = rng() % 5;
    votes.push_back(testing::make_vote(i, models[a], models[b], static_cast<Outcome>(rng() % 4)));
  }
  double sum = 0.0;
  for (const auto& [_, r] : elo_sequential(votes, models, EloConfig{})) sum += r;
  const auto [a, b] = elo_update(1000, 1000, Outcome::kAWins, EloConfig{});
  const double secs = seconds_since(t0);
  return {std::abs(sum - 5000.0) <= 1e-9 && a == 1016.0 && b == 984.0 && secs < 1.0,
          "sum = " + fmt(sum, 15) + ", update = (" + fmt(a) + ", " + fmt(b) + "), " +
              fmt(secs, 3) + " s"};
}

Verdict permutation_machinery() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> models{"strong", "middle", "weak"};
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto votes = testing::bradley_terry_votes(models, {3.0, 1.0, 0.5}, 500, seed);
    EloConfig cfg;
    cfg.permutations = 1000;
    cfg.rng_seed = seed;
    const auto iv = elo_permuted(votes, models, cfg);
    const bool ordered = iv.at("strong").mean > iv.at("middle").mean &&
                         iv.at("middle").mean > iv.at("weak").mean;
    const bool separated = iv.at("strong").ci_low > iv.at("weak").ci_high;
    good += ordered && separated;
  }
  const double secs = seconds_since(t0);
  return {good >= 95 && secs < 30.0,
          std::to_string(good) + "/100 seeds, " + fmt(secs, 3) + " s"};
}

Verdict winpct_criterion() {
  std::vector<Vote> votes;
  std::size_t n = 0;
  for (int i = 0; i < 5; ++i) votes.push_back(testing::make_vote(n++, "A", "B", Outcome::kAWins));
  for (int i = 0; i < 2; ++i) votes.push_back(testing::make_vote(n++, "A", "C", Outcome::kBothGood));
  for (int i = 0; i < 3; ++i) votes.push_back(testing::make_vote(n++, "B", "A", Outcome::kAWins));
  const double wp = winpct(votes, "A");

  const std::vector<std::string> models{"A", "B", "C"};
  auto log = testing::bradley_terry_votes(models, {2, 1, 1}, 300, 5);
  for (std::size_t i = 0; i < log.size(); i += 7) log[i].outcome = Outcome::kBothGood;
  for (std::size_t i = 3; i < log.size(); i += 11) log[i].outcome = Outcome::kNeither;
  std::vector<double> base;
  for (const auto& m : models) base.push_back(winpct(log, m));
  std::mt19937_64 rng(6);
  bool invariant = true;
  for (int s = 0; s < 200; ++s) {
    std::shuffle(log.begin(), log.end(), rng);
    for (std::size_t i = 0; i < models.size(); ++i) invariant &= winpct(log, models[i]) == base[i];
  }
  return {wp == 0.7 && invariant,
          "winpct = " + fmt(wp, 15) + ", 200 shuffles " + (invariant ? "invariant" : "changed")};
}

Verdict pearson_criterion() {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 5, 9};
  const double r = *pearson(x, y);
  const double hand = 11.0 / std::sqrt(130.0);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  bool shape = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MetricColumn> cols(6);
    for (int c = 0; c < 6; ++c) {
      cols[c].name = "c" + std::to_string(c);
      for (int i = 0; i < 8; ++i) cols[c].values.push_back(u(rng));
    }
    const auto m = metric_correlations(cols);
    for (std::size_t i = 0; i < 6; ++i) {
      shape &= m.entries[i][i] == 1.0;
      for (std::size_t j = 0; j < 6; ++j) shape &= m.entries[i][j] == m.entries[j][i];
    }
  }
  const bool stated = std::abs(r - 0.9529) <= 1e-4;
  return {stated && std::abs(r - hand) <= 1e-12 && shape,
          "r = " + fmt(r, 10) + " (hand 11/sqrt(130) = " + fmt(hand, 10) +
              ", stated 0.9529 +/- 1e-4: " + (stated ? "match" : "mismatch") +
              "); matrix symmetric with unit diagonal: " + (shape ? "yes" : "no")};
}

class StoredScores : public QualityScorer {
 public:
  double score(const FinetunePair& p) override { return *p.quality_score; }
};

Verdict filter_combine() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  auto make = [&](std::size_t n, const std::string& source) {
    std::vector<FinetunePair> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({std::to_string(i), "talimat", "yanıt", source, u(rng)});
    }
    return out;
  };
  StoredScores scorer;
  const auto base = make(300, "M");
  bool identity = filter_by_score(base, scorer, 0.0) == base;

  bool subsequence = true;
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = make(1 + rng() % 60, "B");
    const auto out = filter_by_score(in, scorer, u(rng));
    std::size_t j = 0;
    for (const auto& p : in) {
      if (j < out.size() && out[j] == p) ++j;
    }
    subsequence &= j == out.size();
    for (const auto& p : out) subsequence &= *p.quality_score >= 0.0;
  }

  const std::vector<std::vector<FinetunePair>> parts{make(5000, "g"), make(67000, "B"),
                                                     make(16000, "H"), make(51000, "M")};
  const std::size_t total = combine(parts).size();
  return {identity && subsequence && total == 139000,
          std::string("threshold 0 identity: ") + (identity ? "yes" : "no") +
              ", order-preserving subsequence: " + (subsequence ? "yes" : "no") +
              ", combined size = " + std::to_string(total)};
}

Verdict end_to_end_report() {
  using testing::fixture;
  using testing::quoted;
  const auto dataset = load_dataset(fixture("V.jsonl"));
  const auto sets = load_response_dir(fixture("responses/V"), dataset);
  const auto votes = load_votes(fixture("votes.log"));
  const bool inputs_ok = dataset.size() == 10 && dataset.categories().size() == 3 &&
                         sets.size() == 3 && votes.size() == 300;

  testing::TempDir dir;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = testing::run_cli(
      "--seed 1 --embedding-provider hashing report --dataset " + quoted(fixture("V.jsonl")) +
      " --responses " + quoted(fixture("responses/V")) + " --votes " +
      quoted(fixture("votes.log")) + " --general-dataset " + quoted(fixture("G.jsonl")) +
      " --general-responses " + quoted(fixture("responses/G")) + " --out-dir " +
      quoted(dir / "out"));
  const double secs = seconds_since(t0);
  if (r.exit_code != 0) return {false, "report failed: " + r.err};

  const auto summary = parse_tsv(testing::read_text(dir / "out" / "summary_V.tsv"));
  const bool columns =
      summary.header == std::vector<std::string>{"Model", "Cos", "R-1", "R-2", "R-L", "ELO", "WP"};
  const auto cats = parse_tsv(testing::read_text(dir / "out" / "categories.tsv"));
  std::set<std::string> covered;
  for (const auto& row : cats.rows) covered.insert(row[0]);
  const auto corr = parse_tsv(testing::read_text(dir / "out" / "correlations.tsv"));
  const std::size_t corr_cols = corr.header.size() - 1;
  return {inputs_ok && columns && covered.size() == 3 && corr_cols == 10 &&
              corr.rows.size() == 10 && secs < 10.0,
          std::string("summary columns ") + (columns ? "match" : "differ") + ", " +
              std::to_string(covered.size()) + " categories, " + std::to_string(corr_cols) +
              "-column correlation matrix, " + fmt(secs, 3) + " s"};
}

Verdict arena_contracts() {
  const std::vector<std::string> names{"cosmosGPT-Large-BM", "Trendyol-LLM-7b", "turna-base"};
  std::vector<InstructionRecord> records;
  for (int i = 0; i < 12; ++i) {
    records.push_back({"q" + std::to_string(i), i % 2 ? "Basit Matematik" : "Benzerlik Bulma",
                       "soru " + std::to_string(i), "cevap"});
  }
  const EvalDataset ds("V", records);
  std::vector<ResponseSet> sets;
  for (std::size_t m = 0; m < names.size(); ++m) {
    ResponseSet s{names[m], "V", {}};
    for (const auto& r : records) s.responses[r.id] = "yanıt " + std::to_string(m) + " " + r.id;
    sets.push_back(s);
  }
  testing::TempDir dir;

  // Anonymity over every endpoint while voting.
  std::size_t leaks = 0;
  {
    ServiceConfig cfg;
    cfg.seed = 1;
    ArenaService svc(ds, sets, dir / "http.log", cfg);
    HttpFrontend front(svc);
    const int port = front.bind_any_port("127.0.0.1");
    std::thread t([&] { front.listen_after_bind(); });
    httplib::Client c("127.0.0.1", port);
    for (int i = 0; i < 100 && !c.Get("/api/health"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    auto scan = [&](const httplib::Result& res) {
      if (!res) {
        ++leaks;
        return;
      }
      std::string bytes = res->body;
      for (const auto& [k, v] : res->headers) bytes += k + v;
      for (const auto& n : names) leaks += bytes.find(n) != std::string::npos;
    };
    const char* outcomes[] = {"LEFT", "RIGHT", "BOTH_GOOD", "NEITHER"};
    for (int i = 0; i < 100; ++i) {
      scan(c.Get("/api/health"));
      scan(c.Get("/api/categories"));
      auto m = c.Get("/api/match?judge=j" + std::to_string(i % 8));
      scan(m);
      if (!m) continue;
      const Json body{{"match_id", Json::parse(m->body)["match_id"]},
                      {"outcome", outcomes[i % 4]},
                      {"judge_id", "j" + std::to_string(i % 8)}};
      scan(c.Post("/api/vote", body.dump(), "application/json"));
      scan(c.Post("/api/vote", body.dump(), "application/json"));
    }
    front.stop();
    t.join();
  }

  // Scheduler balance.
  std::size_t spread = 0;
  {
    ServiceConfig cfg;
    cfg.seed = 2;
    ArenaService svc(ds, sets, dir / "balance.log", cfg);
    for (int i = 0; i < 3000; ++i) {
      const auto p = svc.next_matchup("j");
      svc.submit_vote(p.match_id, Side::kLeft, "j");
    }
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& [_, c] : svc.pair_counts()) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    spread = hi - lo;
  }

  // Crash replay: acknowledged votes plus one crashed after its append.
  bool lossless = false;
  {
    std::vector<Vote> acknowledged;
    std::string crashed_id;
    {
      bool crash = false;
      ServiceConfig cfg;
      cfg.seed = 3;
      cfg.after_append = [&] {
        if (crash) throw std::runtime_error("crash");
      };
      ArenaService svc(ds, sets, dir / "crash.log", cfg);
      for (int i = 0; i < 50; ++i) {
        const auto p = svc.next_matchup("j");
        svc.submit_vote(p.match_id, static_cast<Side>(i % 4), "j");
      }
      acknowledged = svc.votes();
      crash = true;
      crashed_id = svc.next_matchup("j").match_id;
      try {
        svc.submit_vote(crashed_id, Side::kRight, "j");
      } catch (const std::exception&) {
      }
    }
    ServiceConfig cfg;
    cfg.seed = 4;
    ArenaService restarted(ds, sets, dir / "crash.log", cfg);
    const auto replayed = restarted.votes();
    lossless = replayed.size() == acknowledged.size() + 1 &&
               std::equal(acknowledged.begin(), acknowledged.end(), replayed.begin()) &&
               replayed.back().vote_id == crashed_id;
  }

  return {leaks == 0 && spread <= 1 && lossless,
          std::to_string(leaks) + " model names in endpoint payloads, pair spread " +
              std::to_string(spread) + " after 3000 matchups, crash replay " +
              (lossless ? "lossless" : "lossy")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"ROUGE oracle equivalence", rouge_oracle, ""},
      {"Elo conservation", elo_conservation, ""},
      {"Permutation machinery", permutation_machinery, ""},
      {"WinPct", winpct_criterion, ""},
      {"Pearson oracle", pearson_criterion,
       "the stated 0.9529 disagrees with the hand computation 11/sqrt(130) = 0.9647638"},
      {"Filter/combine", filter_combine, ""},
      {"End-to-end report shape", end_to_end_report, ""},
      {"Arena contracts", arena_contracts, ""},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::string line = std::string(v.pass ? "[PASS] " : "[FAIL] ") + c.name + ": " + v.detail;
    if (!v.pass && !c.known_failure.empty()) line += " (known: " + c.known_failure + ")";
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (!v.pass && c.known_failure.empty()) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
