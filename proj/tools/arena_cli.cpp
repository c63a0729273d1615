// arena-cli: command-line front end over the arena C API.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arena/arena.h"
#include "json.hpp"

namespace {

struct OptionsDeleter {
  void operator()(arena_options* o) const { arena_options_destroy(o); }
};
using OptionsPtr = std::unique_ptr<arena_options, OptionsDeleter>;

struct ServerDeleter {
  void operator()(arena_server* s) const { arena_server_destroy(s); }
};
using ServerPtr = std::unique_ptr<arena_server, ServerDeleter>;

// One line on stderr: {"error":"<code>","message":"..."}.
int report_error(const std::string& code, const std::string& message) {
  nlohmann::json j = {{"error", code}, {"message", message}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return 1;
}

int check(arena_status status) {
  if (status == ARENA_OK) return 0;
  return report_error(arena_status_name(status), arena_last_error());
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

arena_server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) arena_server_stop(g_server);
}

struct GlobalFlags {
  std::string format = "table";
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
  double initial_rating = 1000.0;
  double k_factor = 32.0;
  double scale = 400.0;
  std::size_t permutations = 1000;
  double ci_level = 0.95;
  std::string embedding_provider = "http";
  std::string embedding_url;
  std::string embedding_cache;
  std::size_t embedding_dim = 256;
  std::string scorer_url;
  std::string correlation = "pearson";
};

int build_options(const GlobalFlags& g, OptionsPtr& out) {
  out.reset(arena_options_create());
  if (!out) return report_error("internal", "cannot allocate options");
  if (int rc = check(arena_options_set_format(out.get(), g.format.c_str()))) return rc;
  if (int rc = check(arena_options_set_elo(out.get(), g.initial_rating, g.k_factor, g.scale))) {
    return rc;
  }
  if (int rc = check(arena_options_set_permutations(out.get(), g.permutations, g.ci_level))) {
    return rc;
  }
  if (int rc = check(arena_options_set_correlation(out.get(), g.correlation.c_str()))) return rc;
  if (int rc = check(arena_options_set_embedding(
          out.get(), g.embedding_provider.c_str(), g.embedding_url.c_str(),
          g.embedding_cache.c_str(), g.embedding_dim))) {
    return rc;
  }
  arena_options_set_seed(out.get(), g.seed.value_or(0));
  arena_options_set_jobs(out.get(), g.jobs);
  arena_options_set_scorer_url(out.get(), g.scorer_url.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise evaluation arena: metrics, Elo ratings, reports and a voting service"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--format", g.format, "Output format: table or json")
      ->envname("ARENA_FORMAT")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_option("--seed", g.seed, "Seed for permutations and scheduling")->envname("ARENA_SEED");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")->envname("ARENA_JOBS");
  app.add_option("--initial-rating", g.initial_rating, "Starting Elo rating");
  app.add_option("--k-factor", g.k_factor, "Elo K-factor");
  app.add_option("--scale", g.scale, "Elo logistic scale");
  app.add_option("--permutations", g.permutations, "Shuffled replays of the vote log");
  app.add_option("--ci-level", g.ci_level, "Confidence level of the Elo interval");
  app.add_option("--embedding-provider", g.embedding_provider, "http, hashing or cache")
      ->envname("ARENA_EMBEDDING_PROVIDER");
  app.add_option("--embedding-url", g.embedding_url, "Embedding endpoint URL")
      ->envname("ARENA_EMBEDDING_URL");
  app.add_option("--embedding-cache", g.embedding_cache, "Embedding cache directory")
      ->envname("ARENA_EMBEDDING_CACHE");
  app.add_option("--embedding-dim", g.embedding_dim, "Dimension of the hashing provider");
  app.add_option("--scorer-url", g.scorer_url, "Quality scorer endpoint URL")
      ->envname("ARENA_SCORER_URL");
  app.add_option("--correlation", g.correlation, "pearson or spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}));

  std::string output = "-";

  auto* filter = app.add_subcommand("filter", "Keep finetune pairs scoring >= threshold");
  std::string filter_input;
  double threshold = 0.0;
  filter->add_option("--input,-i", filter_input, "Finetune file")->required();
  filter->add_option("--threshold", threshold, "Minimum quality score in [0,1]")->required();
  filter->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* combine = app.add_subcommand("combine", "Concatenate finetune files in order");
  std::vector<std::string> combine_inputs;
  combine->add_option("inputs", combine_inputs, "Finetune files")->required();
  combine->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* score = app.add_subcommand("score", "Per-model Cos/ROUGE means over a dataset");
  std::string dataset;
  std::vector<std::string> responses;
  score->add_option("--dataset", dataset, "Dataset file")->required();
  score->add_option("--responses", responses, "Response files or directories")->required();
  score->add_option("--output,-o", output, "Output file (- for stdout)");

  std::string votes;
  std::vector<std::string> models;
  auto* elo = app.add_subcommand("elo", "Elo ratings with permutation intervals");
  elo->add_option("--votes", votes, "Vote log")->required();
  elo->add_option("--models", models, "Registered models (default: all in the log)")
      ->delimiter(',');
  elo->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* winpct = app.add_subcommand("winpct", "WinPct per model");
  winpct->add_option("--votes", votes, "Vote log")->required();
  winpct->add_option("--models", models, "Registered models (default: all in the log)")
      ->delimiter(',');
  winpct->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* categories = app.add_subcommand("categories", "WinPct per model and category");
  categories->add_option("--votes", votes, "Vote log")->required();
  categories->add_option("--dataset", dataset, "Dataset file")->required();
  categories->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* correlate = app.add_subcommand("correlate", "Correlation matrix of report columns");
  std::vector<std::string> correlate_inputs;
  correlate->add_option("--input", correlate_inputs, "LABEL=REPORT (repeatable)")->required();
  correlate->add_option("--output,-o", output, "Output file (- for stdout)");

  auto* serve = app.add_subcommand("serve", "Run the blind voting service");
  std::string listen = "127.0.0.1:8080";
  std::string responses_dir, vote_log, scheduler = "balanced", judge_token;
  std::size_t live_permutations = 200;
  serve->add_option("--listen", listen, "host:port")->envname("ARENA_LISTEN");
  serve->add_option("--dataset", dataset, "Dataset file")->envname("ARENA_DATASET")->required();
  serve->add_option("--responses", responses_dir, "Directory of response files")
      ->envname("ARENA_RESPONSES")
      ->required();
  serve->add_option("--vote-log", vote_log, "Append-only vote log")
      ->envname("ARENA_VOTE_LOG")
      ->required();
  serve->add_option("--scheduler", scheduler, "balanced or uniform")
      ->envname("ARENA_SCHEDULER")
      ->check(CLI::IsMember({"balanced", "uniform"}));
  serve->add_option("--live-permutations", live_permutations, "Permutations for the live view")
      ->envname("ARENA_LIVE_PERMUTATIONS");
  serve->add_option("--judge-token", judge_token, "Shared token judges must present")
      ->envname("ARENA_JUDGE_TOKEN");

  auto* report = app.add_subcommand("report", "Full offline report: tables and plots");
  std::string general_dataset, out_dir = "report";
  std::vector<std::string> general_responses;
  report->add_option("--dataset", dataset, "Voting dataset file")->required();
  report->add_option("--responses", responses, "Response files or directories")->required();
  report->add_option("--votes", votes, "Vote log")->required();
  report->add_option("--general-dataset", general_dataset, "General dataset file");
  report->add_option("--general-responses", general_responses,
                     "Response files or directories for the general dataset");
  report->add_option("--out-dir", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }

  OptionsPtr opts;
  if (int rc = build_options(g, opts)) return rc;
  const char* out = output.c_str();

  if (*filter) return check(arena_filter(opts.get(), filter_input.c_str(), out, threshold));

  if (*combine) {
    auto in = c_strings(combine_inputs);
    return check(arena_combine(opts.get(), in.data(), in.size(), out));
  }

  if (*score) {
    auto in = c_strings(responses);
    return check(arena_score(opts.get(), dataset.c_str(), in.data(), in.size(), out));
  }

  if (*elo || *winpct) {
    auto m = c_strings(models);
    auto fn = *elo ? arena_elo : arena_winpct;
    return check(fn(opts.get(), votes.c_str(), m.data(), m.size(), out));
  }

  if (*categories) {
    return check(arena_categories(opts.get(), votes.c_str(), dataset.c_str(), out));
  }

  if (*correlate) {
    std::vector<std::string> labels, paths;
    for (const auto& spec : correlate_inputs) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) {
        labels.emplace_back();
        paths.push_back(spec);
      } else {
        labels.push_back(spec.substr(0, eq));
        paths.push_back(spec.substr(eq + 1));
      }
    }
    auto l = c_strings(labels), p = c_strings(paths);
    return check(arena_correlate(opts.get(), l.data(), p.data(), p.size(), out));
  }

  if (*report) {
    auto r = c_strings(responses), gr = c_strings(general_responses);
    arena_report_inputs in{};
    in.dataset = dataset.c_str();
    in.responses = r.data();
    in.n_responses = r.size();
    in.votes = votes.c_str();
    if (!general_dataset.empty()) {
      in.general_dataset = general_dataset.c_str();
      in.general_responses = gr.data();
      in.n_general_responses = gr.size();
    }
    if (int rc = check(arena_report(opts.get(), &in, out_dir.c_str()))) return rc;
    std::printf("report written to %s\n", out_dir.c_str());
    return 0;
  }

  if (*serve) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) return report_error("usage", "--listen expects host:port");
    const std::string host = listen.substr(0, colon);
    int port = 0;
    try {
      port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
      return report_error("usage", "--listen expects host:port");
    }
    arena_server_config cfg{};
    cfg.dataset = dataset.c_str();
    cfg.responses_dir = responses_dir.c_str();
    cfg.vote_log = vote_log.c_str();
    cfg.scheduler = scheduler.c_str();
    cfg.live_permutations = live_permutations;
    cfg.judge_token = judge_token.empty() ? nullptr : judge_token.c_str();
    cfg.has_seed = g.seed.has_value();
    cfg.seed = g.seed.value_or(0);
    arena_server* raw = nullptr;
    if (int rc = check(arena_server_create(opts.get(), &cfg, &raw))) return rc;
    ServerPtr server(raw);
    g_server = server.get();
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::fprintf(stderr, "serving on http://%s:%d\n", host.c_str(), port);
    const int rc = check(arena_server_listen(server.get(), host.c_str(), port));
    g_server = nullptr;
    return rc;
  }
  return report_error("usage", "no subcommand");
}
