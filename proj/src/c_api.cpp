#include "arena/arena.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "arena/corpus.hpp"
#include "arena/error.hpp"
#include "arena/http_server.hpp"
#include "arena/metrics.hpp"
#include "arena/pipeline.hpp"
#include "arena/rating.hpp"
#include "arena/service.hpp"

struct arena_options {
  arena::PipelineOptions opts;
};

struct arena_dataset {
  arena::EvalDataset dataset;
};

struct arena_rating_report {
  arena::RatingReport report;
};

struct arena_server {
  std::unique_ptr<arena::ArenaService> service;
  std::unique_ptr<arena::HttpFrontend> http;
};

namespace {

thread_local std::string g_last_error;

arena_status fail(arena_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
arena_status guarded(Fn&& fn) {
  try {
    fn();
    return ARENA_OK;
  } catch (const arena::Error& e) {
    return fail(static_cast<arena_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ARENA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ARENA_ERR_INTERNAL, e.what());
  }
}

std::string str_or(const char* s, const char* fallback = "") {
  return s != nullptr ? std::string(s) : std::string(fallback);
}

std::vector<std::filesystem::path> paths(const char* const* items, size_t n) {
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < n; ++i) {
    if (items[i] == nullptr) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument, "null path in list");
    }
    out.emplace_back(items[i]);
  }
  return out;
}

std::vector<std::string> strings(const char* const* items, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    if (items[i] == nullptr) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument, "null string in list");
    }
    out.emplace_back(items[i]);
  }
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    throw arena::Error(arena::ErrorCode::kInvalidArgument, std::string(what) + " is null");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const arena::PipelineOptions& options_or_default(const arena_options* opts) {
  static const arena::PipelineOptions kDefaults;
  return opts != nullptr ? opts->opts : kDefaults;
}

}  // namespace

extern "C" {

const char* arena_status_name(arena_status status) {
  if (status == ARENA_OK) return "ok";
  if (status < ARENA_ERR_INVALID_ARGUMENT || status > ARENA_ERR_INTERNAL) return "unknown";
  return arena::error_code_name(static_cast<arena::ErrorCode>(status)).data();
}

const char* arena_last_error(void) { return g_last_error.c_str(); }

const char* arena_version(void) { return "1.0.0"; }

void arena_string_free(char* s) { std::free(s); }

arena_options* arena_options_create(void) { return new (std::nothrow) arena_options(); }

void arena_options_destroy(arena_options* opts) { delete opts; }

arena_status arena_options_set_elo(arena_options* opts, double initial_rating,
                                   double k_factor, double scale) {
  return guarded([&] {
    require(opts, "options");
    arena::EloConfig cfg = opts->opts.elo;
    cfg.initial_rating = initial_rating;
    cfg.k_factor = k_factor;
    cfg.scale = scale;
    cfg.validate();
    opts->opts.elo = cfg;
  });
}

arena_status arena_options_set_permutations(arena_options* opts, size_t permutations,
                                            double ci_level) {
  return guarded([&] {
    require(opts, "options");
    arena::EloConfig cfg = opts->opts.elo;
    cfg.permutations = permutations;
    cfg.ci_level = ci_level;
    cfg.validate();
    opts->opts.elo = cfg;
  });
}

void arena_options_set_seed(arena_options* opts, uint64_t seed) {
  if (opts) opts->opts.elo.rng_seed = seed;
}

void arena_options_set_jobs(arena_options* opts, size_t jobs) {
  if (opts) opts->opts.jobs = jobs;
}

arena_status arena_options_set_format(arena_options* opts, const char* format) {
  return guarded([&] {
    require(opts, "options");
    require(format, "format");
    auto f = arena::parse_output_format(format);
    if (!f) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument,
                         std::string("unknown format '") + format + "'");
    }
    opts->opts.format = *f;
  });
}

arena_status arena_options_set_correlation(arena_options* opts, const char* method) {
  return guarded([&] {
    require(opts, "options");
    require(method, "method");
    const std::string m = method;
    if (m == "pearson") {
      opts->opts.correlation = arena::CorrelationMethod::kPearson;
    } else if (m == "spearman") {
      opts->opts.correlation = arena::CorrelationMethod::kSpearman;
    } else {
      throw arena::Error(arena::ErrorCode::kInvalidArgument,
                         "unknown correlation method '" + m + "'");
    }
  });
}

arena_status arena_options_set_embedding(arena_options* opts, const char* provider,
                                         const char* url, const char* cache_dir,
                                         size_t hashing_dimension) {
  return guarded([&] {
    require(opts, "options");
    require(provider, "provider");
    const std::string p = provider;
    if (p != "http" && p != "hashing" && p != "cache") {
      throw arena::Error(arena::ErrorCode::kInvalidArgument,
                         "unknown embedding provider '" + p + "'");
    }
    opts->opts.embedding_provider = p;
    opts->opts.embedding_url = str_or(url);
    opts->opts.embedding_cache_dir = str_or(cache_dir);
    if (hashing_dimension > 0) opts->opts.hashing_dimension = hashing_dimension;
  });
}

void arena_options_set_scorer_url(arena_options* opts, const char* url) {
  if (opts) opts->opts.scorer_url = str_or(url);
}

arena_status arena_filter(const arena_options* opts, const char* input, const char* output,
                          double threshold) {
  return guarded([&] {
    require(input, "input");
    arena::run_filter(options_or_default(opts), input, str_or(output, "-"), threshold);
  });
}

arena_status arena_combine(const arena_options* opts, const char* const* inputs,
                           size_t n_inputs, const char* output) {
  return guarded([&] {
    if (n_inputs > 0) require(inputs, "inputs");
    arena::run_combine(options_or_default(opts), paths(inputs, n_inputs),
                       str_or(output, "-"));
  });
}

arena_status arena_score(const arena_options* opts, const char* dataset,
                         const char* const* responses, size_t n_responses,
                         const char* output) {
  return guarded([&] {
    require(dataset, "dataset");
    if (n_responses > 0) require(responses, "responses");
    arena::run_score(options_or_default(opts), dataset, paths(responses, n_responses),
                     str_or(output, "-"));
  });
}

arena_status arena_elo(const arena_options* opts, const char* votes,
                       const char* const* models, size_t n_models, const char* output) {
  return guarded([&] {
    require(votes, "votes");
    if (n_models > 0) require(models, "models");
    arena::run_elo(options_or_default(opts), votes, strings(models, n_models),
                   str_or(output, "-"));
  });
}

arena_status arena_winpct(const arena_options* opts, const char* votes,
                          const char* const* models, size_t n_models, const char* output) {
  return guarded([&] {
    require(votes, "votes");
    if (n_models > 0) require(models, "models");
    arena::run_winpct(options_or_default(opts), votes, strings(models, n_models),
                      str_or(output, "-"));
  });
}

arena_status arena_categories(const arena_options* opts, const char* votes,
                              const char* dataset, const char* output) {
  return guarded([&] {
    require(votes, "votes");
    require(dataset, "dataset");
    arena::run_categories(options_or_default(opts), votes, dataset, str_or(output, "-"));
  });
}

arena_status arena_correlate(const arena_options* opts, const char* const* labels,
                             const char* const* report_paths, size_t n, const char* output) {
  return guarded([&] {
    if (n > 0) {
      require(labels, "labels");
      require(report_paths, "paths");
    }
    std::vector<std::pair<std::string, std::filesystem::path>> inputs;
    for (size_t i = 0; i < n; ++i) {
      require(report_paths[i], "path");
      inputs.emplace_back(str_or(labels[i]), report_paths[i]);
    }
    arena::run_correlate(options_or_default(opts), inputs, str_or(output, "-"));
  });
}

arena_status arena_report(const arena_options* opts, const arena_report_inputs* inputs,
                          const char* out_dir) {
  return guarded([&] {
    require(inputs, "inputs");
    require(inputs->dataset, "dataset");
    require(inputs->votes, "votes");
    require(out_dir, "out_dir");
    arena::ReportInputs in;
    in.dataset = inputs->dataset;
    in.responses = paths(inputs->responses, inputs->n_responses);
    in.votes = inputs->votes;
    if (inputs->general_dataset != nullptr) {
      in.general_dataset = inputs->general_dataset;
      in.general_responses = paths(inputs->general_responses, inputs->n_general_responses);
    }
    arena::run_report(options_or_default(opts), in, out_dir);
  });
}

arena_status arena_rouge_text(const char* candidate, const char* reference,
                              arena_rouge* rouge1, arena_rouge* rouge2, arena_rouge* rougeL) {
  return guarded([&] {
    require(candidate, "candidate");
    require(reference, "reference");
    const auto cand = arena::tokenize(candidate);
    const auto ref = arena::tokenize(reference);
    auto copy = [](const arena::RougeScore& s, arena_rouge* out) {
      if (out) *out = {s.precision, s.recall, s.f1};
    };
    copy(arena::rouge_n(cand, ref, 1), rouge1);
    copy(arena::rouge_n(cand, ref, 2), rouge2);
    copy(arena::rouge_l(cand, ref), rougeL);
  });
}

arena_status arena_cosine(const double* a, const double* b, size_t dimension, double* out) {
  return guarded([&] {
    require(out, "out");
    if (dimension > 0) {
      require(a, "a");
      require(b, "b");
    }
    *out = arena::cosine_similarity(std::span<const double>(a, dimension),
                                    std::span<const double>(b, dimension));
  });
}

arena_status arena_elo_update(double r_a, double r_b, const char* outcome, double k_factor,
                              double scale, double* out_a, double* out_b) {
  return guarded([&] {
    require(outcome, "outcome");
    require(out_a, "out_a");
    require(out_b, "out_b");
    const auto o = arena::parse_outcome(outcome);
    if (!o || *o == arena::Outcome::kNeither) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument,
                         "outcome must be A_WINS, B_WINS or BOTH_GOOD");
    }
    arena::EloConfig cfg;
    cfg.k_factor = k_factor;
    cfg.scale = scale;
    cfg.validate();
    std::tie(*out_a, *out_b) = arena::elo_update(r_a, r_b, *o, cfg);
  });
}

arena_status arena_dataset_load(const char* path, arena_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new arena_dataset{arena::load_dataset(path)};
  });
}

void arena_dataset_destroy(arena_dataset* ds) { delete ds; }

size_t arena_dataset_size(const arena_dataset* ds) { return ds ? ds->dataset.size() : 0; }

const char* arena_dataset_name(const arena_dataset* ds) {
  return ds ? ds->dataset.name().c_str() : nullptr;
}

const char* arena_dataset_record_id(const arena_dataset* ds, size_t i) {
  if (!ds || i >= ds->dataset.size()) return nullptr;
  return ds->dataset.records()[i].id.c_str();
}

const char* arena_dataset_record_category(const arena_dataset* ds, size_t i) {
  if (!ds || i >= ds->dataset.size()) return nullptr;
  return ds->dataset.records()[i].category.c_str();
}

arena_status arena_rate_votes(const arena_options* opts, const char* votes,
                              const char* const* models, size_t n_models,
                              arena_rating_report** out) {
  return guarded([&] {
    require(votes, "votes");
    require(out, "out");
    *out = nullptr;
    if (n_models > 0) require(models, "models");
    const auto& o = options_or_default(opts);
    const auto log = arena::load_votes(votes);
    auto names = strings(models, n_models);
    if (names.empty()) names = arena::models_in(log);
    *out = new arena_rating_report{arena::rate(log, names, o.elo, o.jobs)};
  });
}

size_t arena_rating_report_size(const arena_rating_report* report) {
  return report ? report->report.rows.size() : 0;
}

arena_status arena_rating_report_row(const arena_rating_report* report, size_t i,
                                     arena_rating_row* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    if (i >= report->report.rows.size()) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument, "row index out of range");
    }
    const auto& r = report->report.rows[i];
    *out = {r.model.c_str(), r.elo_sequential, r.elo_mean, r.ci_low,
            r.ci_high,       r.winpct,         r.vote_count};
  });
}

void arena_rating_report_destroy(arena_rating_report* report) { delete report; }

arena_status arena_server_create(const arena_options* opts, const arena_server_config* config,
                                 arena_server** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    require(config->dataset, "dataset");
    require(config->responses_dir, "responses_dir");
    require(config->vote_log, "vote_log");
    *out = nullptr;
    const auto& o = options_or_default(opts);
    arena::ServiceConfig cfg;
    cfg.elo = o.elo;
    cfg.jobs = o.jobs;
    if (config->scheduler != nullptr) {
      auto policy = arena::parse_scheduler(config->scheduler);
      if (!policy) {
        throw arena::Error(arena::ErrorCode::kInvalidArgument,
                           std::string("unknown scheduler '") + config->scheduler + "'");
      }
      cfg.policy = *policy;
    }
    if (config->live_permutations > 0) cfg.live_permutations = config->live_permutations;
    if (config->has_seed) cfg.seed = config->seed;

    arena::EvalDataset dataset = arena::load_dataset(config->dataset);
    auto sets = arena::load_response_dir(config->responses_dir, dataset);
    auto server = std::make_unique<arena_server>();
    server->service = std::make_unique<arena::ArenaService>(
        std::move(dataset), std::move(sets), config->vote_log, std::move(cfg));
    server->http = std::make_unique<arena::HttpFrontend>(*server->service,
                                                         str_or(config->judge_token));
    *out = server.release();
  });
}

void arena_server_destroy(arena_server* server) { delete server; }

arena_status arena_server_next_matchup(arena_server* server, const char* judge_id,
                                       char** json_out) {
  return guarded([&] {
    require(server, "server");
    require(judge_id, "judge_id");
    require(json_out, "json_out");
    *json_out = dup_string(server->service->next_matchup(judge_id).to_json().dump());
  });
}

arena_status arena_server_submit_vote(arena_server* server, const char* match_id,
                                      const char* outcome, const char* judge_id,
                                      char** json_out) {
  return guarded([&] {
    require(server, "server");
    require(match_id, "match_id");
    require(outcome, "outcome");
    require(judge_id, "judge_id");
    const auto side = arena::parse_side(outcome);
    if (!side) {
      throw arena::Error(arena::ErrorCode::kInvalidArgument,
                         "outcome must be LEFT, RIGHT, BOTH_GOOD or NEITHER");
    }
    const auto ack = server->service->submit_vote(match_id, *side, judge_id);
    if (json_out) {
      *json_out = dup_string(arena::Json{{"status", "recorded"},
                                         {"match_id", ack.match_id},
                                         {"vote_id", ack.vote_id}}
                                 .dump());
    }
  });
}

arena_status arena_server_leaderboard(arena_server* server, char** json_out) {
  return guarded([&] {
    require(server, "server");
    require(json_out, "json_out");
    *json_out = dup_string(server->service->leaderboard()->to_json().dump());
  });
}

arena_status arena_server_listen(arena_server* server, const char* host, int port) {
  return guarded([&] {
    require(server, "server");
    if (!server->http->listen(str_or(host, "127.0.0.1"), port)) {
      throw arena::Error(arena::ErrorCode::kIo, "cannot listen on " + str_or(host, "127.0.0.1") +
                                                    ":" + std::to_string(port));
    }
  });
}

int arena_server_bind_any_port(arena_server* server, const char* host) {
  if (!server) return -1;
  return server->http->bind_any_port(str_or(host, "127.0.0.1"));
}

arena_status arena_server_listen_after_bind(arena_server* server) {
  return guarded([&] {
    require(server, "server");
    if (!server->http->listen_after_bind()) {
      throw arena::Error(arena::ErrorCode::kIo, "server stopped with an error");
    }
  });
}

void arena_server_stop(arena_server* server) {
  if (server) server->http->stop();
}

}  // extern "C"
