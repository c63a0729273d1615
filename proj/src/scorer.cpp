#include "arena/scorer.hpp"

#include "arena/error.hpp"
#include "arena/jsonl.hpp"
#include "httplib.h"

namespace arena {

HttpQualityScorer::HttpQualityScorer(std::string url, double timeout_seconds)
    : endpoint_(parse_endpoint(url, "/score")), timeout_seconds_(timeout_seconds) {}

double HttpQualityScorer::score(const FinetunePair& pair) {
  httplib::Client client(endpoint_.base);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  Json body = {{"instruction", pair.instruction}, {"response", pair.response}};
  auto res = client.Post(endpoint_.path, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderUnreachable,
                "scorer " + endpoint_.base + " unreachable: " +
                    httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kMalformedResponse,
                "scorer answered HTTP " + std::to_string(res->status));
  }
  try {
    Json reply = Json::parse(res->body);
    return reply.at("score").get<double>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kMalformedResponse, "scorer reply lacks a numeric score");
  }
}

double StoredScoreScorer::score(const FinetunePair& pair) {
  if (!pair.quality_score) {
    throw Error(ErrorCode::kScorerFailure, "no stored quality_score");
  }
  return *pair.quality_score;
}

}  // namespace arena
