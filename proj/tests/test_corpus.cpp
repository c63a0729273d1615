#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "arena/corpus.hpp"
#include "arena/error.hpp"
#include "support.hpp"

using namespace arena;
using testing::TempDir;
using testing::write_text;

namespace {

class TableScorer : public QualityScorer {
 public:
  explicit TableScorer(std::map<std::string, double> scores) : scores_(std::move(scores)) {}
  double score(const FinetunePair& p) override { return scores_.at(p.id); }

 private:
  std::map<std::string, double> scores_;
};

class FailingScorer : public QualityScorer {
 public:
  double score(const FinetunePair& p) override {
    if (p.id == "bad") throw std::runtime_error("model crashed");
    return 0.9;
  }
};

FinetunePair pair(std::string id, std::string source = "M") {
  return {std::move(id), "soru", "cevap", std::move(source), std::nullopt};
}

std::vector<FinetunePair> pairs(std::size_t n, const std::string& source) {
  std::vector<FinetunePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pair(std::to_string(i), source));
  return out;
}

}  // namespace

TEST_CASE("load_dataset keeps file order") {
  TempDir dir;
  write_text(dir / "tiny.jsonl",
             "{\"id\":\"q1\",\"category\":\"A\",\"instruction\":\"Bir\"}\n"
             "{\"id\":\"q2\",\"category\":\"B\",\"instruction\":\"İki\",\"reference_answer\":\"2\"}\n");
  const auto ds = load_dataset(dir / "tiny.jsonl");
  REQUIRE(ds.size() == 2);
  CHECK(ds.name() == "tiny");
  CHECK(ds.records()[0].id == "q1");
  CHECK(ds.records()[1].id == "q2");
  CHECK_FALSE(ds.records()[0].reference_answer.has_value());
  CHECK(ds.records()[1].reference_answer == "2");
}

TEST_CASE("duplicate record ids are rejected naming the id") {
  TempDir dir;
  write_text(dir / "dup.jsonl",
             "{\"id\":\"q1\",\"instruction\":\"a\"}\n{\"id\":\"q1\",\"instruction\":\"b\"}\n");
  try {
    load_dataset(dir / "dup.jsonl");
    FAIL("expected duplicate id error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateId);
    CHECK(std::string(e.what()).find("q1") != std::string::npos);
  }
}

TEST_CASE("blank instruction or reference answer is rejected") {
  TempDir dir;
  write_text(dir / "a.jsonl", "{\"id\":\"q1\",\"instruction\":\"  \"}\n");
  CHECK_THROWS_AS(load_dataset(dir / "a.jsonl"), Error);
  write_text(dir / "b.jsonl", "{\"id\":\"q1\",\"instruction\":\"x\",\"reference_answer\":\" \"}\n");
  CHECK_THROWS_AS(load_dataset(dir / "b.jsonl"), Error);
  write_text(dir / "c.jsonl", "{\"id\":\"q1\",\"instruction\":\"x\"\n");
  try {
    load_dataset(dir / "c.jsonl");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("bundled voting dataset carries the similarity row") {
  const auto ds = load_dataset(testing::fixture("V.jsonl"));
  CHECK(ds.size() == 10);
  const auto* r = ds.find("v01");
  REQUIRE(r != nullptr);
  CHECK(r->category == "Benzerlik Bulma");
  CHECK(r->instruction.rfind("Aşağıdaki listede çorap, ", 0) == 0);
  CHECK(ds.categories() ==
        std::vector<std::string>{"Benzerlik Bulma", "Basit Matematik", "Hikaye Oluşturma"});
}

TEST_CASE("dataset save/load round trip") {
  TempDir dir;
  const auto ds = load_dataset(testing::fixture("V.jsonl"));
  save_dataset(ds, dir / "V.jsonl");
  const auto again = load_dataset(dir / "V.jsonl");
  CHECK(again.records() == ds.records());
}

TEST_CASE("filter_by_score keeps pairs at or above the threshold") {
  std::vector<FinetunePair> in{pair("a"), pair("b")};
  TableScorer scorer({{"a", 0.3}, {"b", 0.7}});
  auto out = filter_by_score(in, scorer, 0.5);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == "b");
  CHECK(out[0].quality_score == 0.7);

  out = filter_by_score(in, scorer, 0.0);
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == "a");
  CHECK(out[1].id == "b");

  CHECK_THROWS_AS(filter_by_score(in, scorer, 1.5), Error);
  CHECK_THROWS_AS(filter_by_score(in, scorer, -0.1), Error);
}

TEST_CASE("filter_by_score equals a linear scan on random scores") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FinetunePair> in;
  std::map<std::string, double> scores;
  for (int i = 0; i < 100; ++i) {
    in.push_back(pair("p" + std::to_string(i)));
    scores["p" + std::to_string(i)] = u(rng);
  }
  TableScorer scorer(scores);
  const auto out = filter_by_score(in, scorer, 0.6);
  std::vector<std::string> expected;
  for (const auto& p : in) {
    if (scores[p.id] >= 0.6) expected.push_back(p.id);
  }
  std::vector<std::string> got;
  for (const auto& p : out) got.push_back(p.id);
  CHECK(got == expected);
}

TEST_CASE("scorer failure aborts the whole filter naming the pair") {
  std::vector<FinetunePair> in{pair("ok"), pair("bad")};
  FailingScorer scorer;
  try {
    filter_by_score(in, scorer, 0.5);
    FAIL("expected scorer failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kScorerFailure);
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  TableScorer out_of_range({{"ok", 1.2}, {"bad", 0.1}});
  CHECK_THROWS_AS(filter_by_score(in, out_of_range, 0.5), Error);
}

TEST_CASE("combine concatenates in order with source-prefixed ids") {
  const auto m = pairs(2, "M");
  auto one = combine(std::vector<std::vector<FinetunePair>>{m});
  REQUIRE(one.size() == 2);
  CHECK(one[0].id == "M/0");
  CHECK(one[0].instruction == m[0].instruction);

  auto bm = combine(std::vector<std::vector<FinetunePair>>{pairs(3, "B"), pairs(2, "M")});
  REQUIRE(bm.size() == 5);
  CHECK(bm[0].source == "B");
  CHECK(bm[2].source == "B");
  CHECK(bm[3].source == "M");

  const std::vector<std::vector<FinetunePair>> parts{pairs(5000, "g"), pairs(67000, "B"),
                                                     pairs(16000, "H"), pairs(51000, "M")};
  CHECK(combine(parts).size() == 139000);
  CHECK_THROWS_AS(combine(std::vector<std::vector<FinetunePair>>{}), Error);
}

TEST_CASE("finetune files round trip and validate") {
  TempDir dir;
  std::vector<FinetunePair> ps{pair("a"), pair("b")};
  ps[1].quality_score = 0.25;
  save_finetune(ps, dir / "ft.jsonl");
  CHECK(load_finetune(dir / "ft.jsonl") == ps);
  write_text(dir / "bad.jsonl",
             "{\"id\":\"a\",\"instruction\":\"x\",\"response\":\"y\",\"source\":\"M\","
             "\"quality_score\":2}\n");
  CHECK_THROWS_AS(load_finetune(dir / "bad.jsonl"), Error);
}

TEST_CASE("response sets") {
  TempDir dir;
  write_text(dir / "D.jsonl",
             "{\"id\":\"q1\",\"instruction\":\"a\"}\n{\"id\":\"q2\",\"instruction\":\"b\"}\n");
  const auto ds = load_dataset(dir / "D.jsonl");

  write_text(dir / "full.jsonl",
             "{\"model_name\":\"m1\",\"dataset_name\":\"D\"}\n"
             "{\"id\":\"q1\",\"response\":\"x\"}\n{\"id\":\"q2\",\"response\":\"y\"}\n");
  CHECK(load_response_set(dir / "full.jsonl", ds).responses.size() == 2);

  write_text(dir / "partial.jsonl",
             "{\"model_name\":\"m1\"}\n{\"id\":\"q1\",\"response\":\"x\"}\n");
  const auto partial = load_response_set(dir / "partial.jsonl", ds);
  CHECK(partial.responses.size() == 1);
  CHECK(partial.dataset_name == "D");

  write_text(dir / "unknown.jsonl",
             "{\"model_name\":\"m1\"}\n{\"id\":\"q99\",\"response\":\"x\"}\n");
  try {
    load_response_set(dir / "unknown.jsonl", ds);
    FAIL("expected unknown id");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownId);
    CHECK(std::string(e.what()).find("q99") != std::string::npos);
  }

  write_text(dir / "other.jsonl", "{\"model_name\":\"m1\",\"dataset_name\":\"G\"}\n");
  CHECK_THROWS_AS(load_response_set(dir / "other.jsonl", ds), Error);
  write_text(dir / "nameless.jsonl", "{\"dataset_name\":\"D\"}\n");
  CHECK_THROWS_AS(load_response_set(dir / "nameless.jsonl", ds), Error);
}

TEST_CASE("response directories load every model once") {
  const auto ds = load_dataset(testing::fixture("V.jsonl"));
  const auto sets = load_response_dir(testing::fixture("responses/V"), ds);
  REQUIRE(sets.size() == 3);
  CHECK(sets[0].model_name == "alpha-large");
  CHECK(sets[2].responses.size() == 9);

  TempDir dir;
  const auto one = testing::read_text(testing::fixture("responses/V/alpha-large.jsonl"));
  write_text(dir / "a.jsonl", one);
  write_text(dir / "b.jsonl", one);
  CHECK_THROWS_AS(load_response_dir(dir.path(), ds), Error);
}
