#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cli_runner.hpp"
#include "json.hpp"

using testing::fixture;
using testing::quoted;
using testing::run_cli;

namespace {

std::string report_args(const std::filesystem::path& out_dir) {
  return "--seed 3 --embedding-provider hashing report --dataset " + quoted(fixture("V.jsonl")) +
         " --responses " + quoted(fixture("responses/V")) + " --votes " +
         quoted(fixture("votes.log")) + " --general-dataset " + quoted(fixture("G.jsonl")) +
         " --general-responses " + quoted(fixture("responses/G")) + " --out-dir " +
         quoted(out_dir);
}

void check_single_line_error(const testing::CliResult& r, const std::string& code) {
  CHECK(r.exit_code != 0);
  const auto lines = testing::lines_of(r.err);
  REQUIRE(lines.size() == 1);
  const auto j = nlohmann::json::parse(lines[0]);
  CHECK(j["error"] == code);
  CHECK(j["message"].is_string());
}

}  // namespace

TEST_CASE("elo on the one-vote log shows 1016/984") {
  const auto r = run_cli("elo --votes " + quoted(fixture("one_vote.log")));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("alpha-large\t1016.000000") != std::string::npos);
  CHECK(r.out.find("beta-medium\t984.000000") != std::string::npos);
}

TEST_CASE("filter at 0.5 on the two-pair fixture writes one line") {
  testing::TempDir dir;
  const auto r = run_cli("filter --input " + quoted(fixture("pairs.jsonl")) +
                         " --threshold 0.5 --output " + quoted(dir / "kept.jsonl"));
  CHECK(r.exit_code == 0);
  const auto lines = testing::lines_of(testing::read_text(dir / "kept.jsonl"));
  REQUIRE(lines.size() == 1);
  CHECK(nlohmann::json::parse(lines[0])["id"] == "p2");
}

TEST_CASE("report writes the summary table") {
  testing::TempDir dir;
  const auto r = run_cli(report_args(dir / "out"));
  REQUIRE(r.exit_code == 0);
  const auto summary = testing::lines_of(testing::read_text(dir / "out" / "summary_V.tsv"));
  REQUIRE(summary.size() == 4);
  CHECK(summary[0] == "Model\tCos\tR-1\tR-2\tR-L\tELO\tWP");
}

TEST_CASE("same seed, same bytes") {
  testing::TempDir a, b;
  REQUIRE(run_cli(report_args(a / "out")).exit_code == 0);
  REQUIRE(run_cli(report_args(b / "out")).exit_code == 0);
  for (const auto& entry : std::filesystem::directory_iterator(a / "out")) {
    CHECK(testing::read_text(entry.path()) ==
          testing::read_text(b / "out" / entry.path().filename().string()));
  }
  const auto e1 = run_cli("--seed 9 --format json elo --votes " + quoted(fixture("votes.log")));
  const auto e2 = run_cli("--seed 9 --format json elo --votes " + quoted(fixture("votes.log")));
  CHECK(e1.out == e2.out);
  CHECK(nlohmann::json::parse(e1.out)["permutations"] == 1000);
}

TEST_CASE("subcommands on the fixtures") {
  const auto w = run_cli("winpct --votes " + quoted(fixture("votes.log")));
  CHECK(w.exit_code == 0);
  CHECK(w.out.rfind("model\twinpct\twin\tboth\tvote_count\n", 0) == 0);

  const auto c = run_cli("categories --votes " + quoted(fixture("votes.log")) + " --dataset " +
                         quoted(fixture("V.jsonl")));
  CHECK(c.exit_code == 0);
  CHECK(testing::lines_of(c.out).size() == 10);

  const auto s = run_cli("--embedding-provider hashing --format json score --dataset " +
                         quoted(fixture("G.jsonl")) + " --responses " +
                         quoted(fixture("responses/G")));
  CHECK(s.exit_code == 0);
  CHECK(nlohmann::json::parse(s.out)["rows"].size() == 3);

  testing::TempDir dir;
  const auto comb = run_cli("combine " + quoted(fixture("pairs.jsonl")) + " --output " +
                            quoted(dir / "c.jsonl"));
  CHECK(comb.exit_code == 0);
  CHECK(testing::lines_of(testing::read_text(dir / "c.jsonl")).size() == 2);

  REQUIRE(run_cli("--embedding-provider hashing score --dataset " + quoted(fixture("V.jsonl")) +
                  " --responses " + quoted(fixture("responses/V")) + " -o " +
                  quoted(dir / "m.tsv"))
              .exit_code == 0);
  REQUIRE(run_cli("elo --votes " + quoted(fixture("votes.log")) + " -o " + quoted(dir / "r.tsv"))
              .exit_code == 0);
  const auto corr = run_cli("--correlation spearman correlate --input V=" +
                            quoted(dir / "m.tsv") + " --input V=" + quoted(dir / "r.tsv"));
  CHECK(corr.exit_code == 0);
  CHECK(testing::lines_of(corr.out).size() == 7);
}

TEST_CASE("failures are one machine-parsable line on stderr") {
  check_single_line_error(run_cli("elo --votes /nonexistent.log"), "io");
  check_single_line_error(run_cli("filter --input " + quoted(fixture("pairs.jsonl"))), "usage");
  check_single_line_error(run_cli("filter --input " + quoted(fixture("pairs.jsonl")) +
                                  " --threshold 2"),
                          "invalid_argument");
  check_single_line_error(run_cli("elo --votes " + quoted(fixture("one_vote.log")) +
                                  " --models alpha-large"),
                          "unknown_model");
  check_single_line_error(run_cli("bogus"), "usage");
  check_single_line_error(run_cli("score --dataset " + quoted(fixture("V.jsonl")) +
                                  " --responses " + quoted(fixture("responses/V"))),
                          "invalid_argument");
  check_single_line_error(run_cli("score --dataset " + quoted(fixture("V.jsonl")) +
                                      " --responses " + quoted(fixture("responses/V")),
                                  "ARENA_EMBEDDING_URL=http://127.0.0.1:1/embed"),
                          "provider_unreachable");
}

TEST_CASE("a failed run leaves the previous output untouched") {
  testing::TempDir dir;
  testing::write_text(dir / "r.tsv", "previous\n");
  const auto r = run_cli("elo --votes /nonexistent.log -o " + quoted(dir / "r.tsv"));
  CHECK(r.exit_code != 0);
  CHECK(testing::read_text(dir / "r.tsv") == "previous\n");
}

TEST_CASE("serve reads its configuration from the environment") {
  const auto missing = run_cli("serve");
  check_single_line_error(missing, "usage");
  const auto r = run_cli("serve", "ARENA_DATASET=/nonexistent.jsonl ARENA_RESPONSES=/x "
                                  "ARENA_VOTE_LOG=/tmp/x.log");
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("\"error\":\"io\"") != std::string::npos);
}
