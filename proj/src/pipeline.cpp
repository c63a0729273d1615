#include "arena/pipeline.hpp"

#include <algorithm>
#include <set>

#include "arena/corpus.hpp"
#include "arena/error.hpp"
#include "arena/plots.hpp"
#include "arena/scorer.hpp"

namespace arena {

namespace {

std::string ext(OutputFormat fmt) { return fmt == OutputFormat::kJson ? ".json" : ".tsv"; }

std::vector<std::string> resolve_models(std::span<const Vote> votes,
                                        std::vector<std::string> models) {
  if (models.empty()) return models_in(votes);
  std::set<std::string> seen;
  for (const auto& m : models) {
    if (!seen.insert(m).second) {
      throw Error(ErrorCode::kDuplicateId, "model '" + m + "' listed twice");
    }
  }
  return models;
}

std::string render_winpct(std::span<const Vote> votes, std::span<const std::string> models,
                          OutputFormat fmt) {
  if (fmt == OutputFormat::kJson) {
    Json rows = Json::array();
    for (const auto& m : models) {
      const WinCounts c = win_counts(votes, m);
      rows.push_back({{"model", m},
                      {"winpct", winpct(votes, m)},
                      {"win", c.win},
                      {"both", c.both},
                      {"vote_count", c.total}});
    }
    return Json{{"rows", rows}}.dump(2) + "\n";
  }
  Table t{{"model", "winpct", "win", "both", "vote_count"}, {}};
  for (const auto& m : models) {
    const WinCounts c = win_counts(votes, m);
    t.rows.push_back({m, format_number(winpct(votes, m)), std::to_string(c.win),
                      std::to_string(c.both), std::to_string(c.total)});
  }
  return t.to_tsv();
}

bool is_rating_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      const Json j = Json::parse(text);
      return j.contains("permutations");
    } catch (const Json::exception&) {
      throw Error(ErrorCode::kParse, path.string() + ": invalid JSON");
    }
  }
  return parse_tsv(text).column("elo_mean") != std::string::npos;
}

}  // namespace

std::unique_ptr<Embedder> make_embedder(const PipelineOptions& opts) {
  std::shared_ptr<EmbeddingProvider> provider;
  if (opts.embedding_provider == "hashing") {
    provider = std::make_shared<HashingEmbeddingProvider>(opts.hashing_dimension);
  } else if (opts.embedding_provider == "http") {
    if (opts.embedding_url.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "embedding provider 'http' needs an endpoint URL");
    }
    provider = std::make_shared<HttpEmbeddingProvider>(opts.embedding_url);
  } else if (opts.embedding_provider != "cache") {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown embedding provider '" + opts.embedding_provider + "'");
  }
  if (!provider && opts.embedding_cache_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding provider 'cache' needs a cache directory");
  }
  return std::make_unique<Embedder>(std::move(provider), opts.embedding_cache_dir);
}

void run_filter(const PipelineOptions& opts, const std::filesystem::path& input,
                const std::string& output, double threshold) {
  const auto pairs = load_finetune(input);
  std::unique_ptr<QualityScorer> scorer;
  if (opts.scorer_url.empty()) {
    scorer = std::make_unique<StoredScoreScorer>();
  } else {
    scorer = std::make_unique<HttpQualityScorer>(opts.scorer_url);
  }
  const auto kept = filter_by_score(pairs, *scorer, threshold);
  std::string out;
  for (const auto& p : kept) {
    out += Json{{"id", p.id},
                {"instruction", p.instruction},
                {"response", p.response},
                {"source", p.source},
                {"quality_score", *p.quality_score}}
               .dump();
    out += '\n';
  }
  write_output(output, out);
}

void run_combine(const PipelineOptions&, const std::vector<std::filesystem::path>& inputs,
                 const std::string& output) {
  std::vector<std::vector<FinetunePair>> parts;
  for (const auto& in : inputs) parts.push_back(load_finetune(in));
  const auto combined = combine(parts);
  std::string out;
  for (const auto& p : combined) {
    Json j = {{"id", p.id},
              {"instruction", p.instruction},
              {"response", p.response},
              {"source", p.source},
              {"quality_score", nullptr}};
    if (p.quality_score) j["quality_score"] = *p.quality_score;
    out += j.dump();
    out += '\n';
  }
  write_output(output, out);
}

std::vector<ResponseSet> load_responses(const std::vector<std::filesystem::path>& responses,
                                        const EvalDataset& dataset) {
  std::vector<ResponseSet> sets;
  std::set<std::string> models;
  for (const auto& p : responses) {
    std::vector<ResponseSet> loaded;
    if (std::filesystem::is_directory(p)) {
      loaded = load_response_dir(p, dataset);
    } else {
      loaded.push_back(load_response_set(p, dataset));
    }
    for (auto& s : loaded) {
      if (!models.insert(s.model_name).second) {
        throw Error(ErrorCode::kDuplicateId,
                    "two response sets for model '" + s.model_name + "'");
      }
      sets.push_back(std::move(s));
    }
  }
  if (sets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no response sets given");
  }
  return sets;
}

void run_score(const PipelineOptions& opts, const std::filesystem::path& dataset_path,
               const std::vector<std::filesystem::path>& responses,
               const std::string& output) {
  const EvalDataset dataset = load_dataset(dataset_path);
  const auto sets = load_responses(responses, dataset);
  auto embedder = make_embedder(opts);
  const MetricReport report = score_models(dataset, sets, *embedder, opts.jobs);
  write_output(output, render(report, opts.format));
}

void run_elo(const PipelineOptions& opts, const std::filesystem::path& votes_path,
             std::vector<std::string> models, const std::string& output) {
  const auto votes = load_votes(votes_path);
  models = resolve_models(votes, std::move(models));
  const RatingReport report = rate(votes, models, opts.elo, opts.jobs);
  write_output(output, render(report, opts.format));
}

void run_winpct(const PipelineOptions& opts, const std::filesystem::path& votes_path,
                std::vector<std::string> models, const std::string& output) {
  const auto votes = load_votes(votes_path);
  models = resolve_models(votes, std::move(models));
  write_output(output, render_winpct(votes, models, opts.format));
}

void run_categories(const PipelineOptions& opts, const std::filesystem::path& votes_path,
                    const std::filesystem::path& dataset_path, const std::string& output) {
  const auto votes = load_votes(votes_path);
  const EvalDataset dataset = load_dataset(dataset_path);
  write_output(output, render(category_winpct(votes, dataset), opts.format));
}

void run_correlate(const PipelineOptions& opts,
                   const std::vector<std::pair<std::string, std::filesystem::path>>& inputs,
                   const std::string& output) {
  if (inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "no reports to correlate");
  std::vector<std::string> models;
  std::vector<MetricColumn> columns;
  for (const auto& [label, path] : inputs) {
    if (is_rating_report(path)) {
      const RatingReport r = read_rating_report(path);
      if (models.empty()) {
        for (const auto& row : r.rows) models.push_back(row.model);
      }
      append_rating_columns(columns, label, r, models);
    } else {
      const MetricReport r = read_metric_report(path);
      if (models.empty()) {
        for (const auto& row : r.rows) models.push_back(row.model);
      }
      append_metric_columns(columns, label, r, models);
    }
  }
  write_output(output, render(metric_correlations(columns, opts.correlation), opts.format));
}

std::vector<std::filesystem::path> run_report(const PipelineOptions& opts,
                                              const ReportInputs& inputs,
                                              const std::filesystem::path& out_dir) {
  const EvalDataset dataset = load_dataset(inputs.dataset);
  const auto sets = load_responses(inputs.responses, dataset);
  std::vector<std::string> models;
  for (const auto& s : sets) models.push_back(s.model_name);

  auto embedder = make_embedder(opts);
  const MetricReport metrics = score_models(dataset, sets, *embedder, opts.jobs);
  const auto votes = load_votes(inputs.votes);
  const RatingReport ratings = rate(votes, models, opts.elo, opts.jobs);
  const CategoryBreakdown breakdown = category_winpct(votes, dataset);

  std::vector<MetricColumn> columns;
  append_metric_columns(columns, dataset.name(), metrics, models);
  append_rating_columns(columns, dataset.name(), ratings, models);

  // (file name, content), all rendered before anything touches the disk.
  std::vector<std::pair<std::string, std::string>> outputs;
  const auto fmt = opts.format;
  outputs.emplace_back("metrics_" + dataset.name() + ext(fmt), render(metrics, fmt));
  outputs.emplace_back("ratings" + ext(fmt), render(ratings, fmt));
  outputs.emplace_back("summary_" + dataset.name() + ext(fmt),
                       render_summary(metrics, &ratings, models, fmt));
  outputs.emplace_back("categories" + ext(fmt), render(breakdown, fmt));

  if (inputs.general_dataset) {
    const EvalDataset general = load_dataset(*inputs.general_dataset);
    if (general.name() == dataset.name()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "voting and general datasets share the name '" + general.name() + "'");
    }
    const auto general_sets = load_responses(inputs.general_responses, general);
    const MetricReport general_metrics =
        score_models(general, general_sets, *embedder, opts.jobs);
    append_metric_columns(columns, general.name(), general_metrics, models);
    outputs.emplace_back("metrics_" + general.name() + ext(fmt), render(general_metrics, fmt));
    outputs.emplace_back("summary_" + general.name() + ext(fmt),
                         render_summary(general_metrics, nullptr, models, fmt));
  }

  outputs.emplace_back("correlations" + ext(fmt),
                       render(metric_correlations(columns, opts.correlation), fmt));
  outputs.emplace_back("elo_ci.svg",
                       render_elo_svg(ratings, "ELO ratings (" + dataset.name() + ")"));
  outputs.emplace_back("categories.svg",
                       render_category_svg(breakdown, "WinPct by category (" + dataset.name() + ")"));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : outputs) {
    write_file_atomically(out_dir / name, content);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace arena
