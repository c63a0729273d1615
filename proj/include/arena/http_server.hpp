#pragma once

#include <memory>
#include <string>

#include "arena/service.hpp"

namespace httplib {
class Server;
}

namespace arena {

// HTTP binding of ArenaService:
//   GET  /api/match?judge=<id>      -> MatchPayload
//   POST /api/vote {match_id, outcome, judge_id}
//   GET  /api/leaderboard
//   GET  /api/categories
//   GET  /api/health
// Errors answer {"error": <code>, "message": <text>} with a 4xx/5xx status.
// When `judge_token` is non-empty, /api/match and /api/vote require it in the
// X-Judge-Token header or the `token` query parameter.
class HttpFrontend {
 public:
  HttpFrontend(ArenaService& service, std::string judge_token = {});
  ~HttpFrontend();

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (or -1); pair with listen_after_bind.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  void install_routes();

  ArenaService& service_;
  std::string judge_token_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace arena
