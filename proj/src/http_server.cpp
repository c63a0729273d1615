#include "arena/http_server.hpp"

#include "arena/error.hpp"
#include "httplib.h"

namespace arena {

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownMatch: return 404;
    case ErrorCode::kAlreadyResolved: return 409;
    case ErrorCode::kJudgeMismatch: return 403;
    case ErrorCode::kInsufficientModels:
    case ErrorCode::kNoCommonRecord: return 503;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse: return 400;
    default: return 500;
  }
}

void reply_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply_json(res, http_status(code),
             {{"error", error_code_name(code)}, {"message", message}});
}

}  // namespace

HttpFrontend::HttpFrontend(ArenaService& service, std::string judge_token)
    : service_(service),
      judge_token_(std::move(judge_token)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpFrontend::~HttpFrontend() { stop(); }

void HttpFrontend::install_routes() {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Cache-Control", "no-store"}});

  auto authorized = [this](const httplib::Request& req) {
    if (judge_token_.empty()) return true;
    if (req.get_header_value("X-Judge-Token") == judge_token_) return true;
    return req.get_param_value("token") == judge_token_;
  };

  auto guarded = [](auto&& fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        reply_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        reply_error(res, ErrorCode::kInternal, e.what());
      }
    };
  };

  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Judge-Token");
    res.status = 204;
  });

  srv.Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, {{"status", "ok"}, {"models", service_.models().size()}});
  }));

  srv.Get("/api/categories",
          guarded([this](const httplib::Request&, httplib::Response& res) {
            reply_json(res, 200, {{"categories", service_.categories()}});
          }));

  srv.Get("/api/match", guarded([this, authorized](const httplib::Request& req,
                                                   httplib::Response& res) {
    if (!authorized(req)) {
      reply_json(res, 401, {{"error", "unauthorized"}, {"message", "bad judge token"}});
      return;
    }
    const std::string judge = req.get_param_value("judge");
    if (judge.empty()) {
      reply_error(res, ErrorCode::kInvalidArgument, "missing judge parameter");
      return;
    }
    reply_json(res, 200, service_.next_matchup(judge).to_json());
  }));

  srv.Post("/api/vote", guarded([this, authorized](const httplib::Request& req,
                                                   httplib::Response& res) {
    if (!authorized(req)) {
      reply_json(res, 401, {{"error", "unauthorized"}, {"message", "bad judge token"}});
      return;
    }
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error&) {
      reply_error(res, ErrorCode::kParse, "body is not JSON");
      return;
    }
    if (!body.is_object() || !body.contains("match_id") || !body.contains("outcome") ||
        !body.contains("judge_id") || !body["match_id"].is_string() ||
        !body["outcome"].is_string() || !body["judge_id"].is_string()) {
      reply_error(res, ErrorCode::kInvalidArgument,
                  "body must carry string match_id, outcome and judge_id");
      return;
    }
    const auto side = parse_side(body["outcome"].get<std::string>());
    if (!side) {
      reply_error(res, ErrorCode::kInvalidArgument,
                  "outcome must be LEFT, RIGHT, BOTH_GOOD or NEITHER");
      return;
    }
    const VoteAck ack = service_.submit_vote(body["match_id"].get<std::string>(), *side,
                                             body["judge_id"].get<std::string>());
    reply_json(res, 200,
               {{"status", "recorded"}, {"match_id", ack.match_id}, {"vote_id", ack.vote_id}});
  }));

  srv.Get("/api/leaderboard",
          guarded([this](const httplib::Request&, httplib::Response& res) {
            reply_json(res, 200, service_.leaderboard()->to_json());
          }));
}

bool HttpFrontend::listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int HttpFrontend::bind_any_port(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool HttpFrontend::listen_after_bind() { return server_->listen_after_bind(); }

void HttpFrontend::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace arena
