#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arena/analysis.hpp"
#include "arena/embedding.hpp"
#include "arena/rating.hpp"
#include "arena/tables.hpp"

namespace arena {

// File-level entry points behind the C API and the CLI. Every function
// computes all of its results before writing anything, and writes each output
// atomically.
struct PipelineOptions {
  EloConfig elo;
  std::size_t jobs = 0;
  OutputFormat format = OutputFormat::kTable;
  CorrelationMethod correlation = CorrelationMethod::kPearson;

  // "http" talks to embedding_url; "hashing" uses HashingEmbeddingProvider;
  // "cache" serves cache hits only.
  std::string embedding_provider = "http";
  std::string embedding_url;
  std::filesystem::path embedding_cache_dir;
  std::size_t hashing_dimension = 256;

  // Empty means: use the quality_score stored on each pair.
  std::string scorer_url;
};

std::unique_ptr<Embedder> make_embedder(const PipelineOptions& opts);

void run_filter(const PipelineOptions& opts, const std::filesystem::path& input,
                const std::string& output, double threshold);

void run_combine(const PipelineOptions& opts,
                 const std::vector<std::filesystem::path>& inputs,
                 const std::string& output);

// Each entry of `responses` is a response file or a directory of them.
std::vector<ResponseSet> load_responses(const std::vector<std::filesystem::path>& responses,
                                        const EvalDataset& dataset);

void run_score(const PipelineOptions& opts, const std::filesystem::path& dataset,
               const std::vector<std::filesystem::path>& responses,
               const std::string& output);

// `models` empty means every model named in the log, sorted.
void run_elo(const PipelineOptions& opts, const std::filesystem::path& votes,
             std::vector<std::string> models, const std::string& output);

void run_winpct(const PipelineOptions& opts, const std::filesystem::path& votes,
                std::vector<std::string> models, const std::string& output);

void run_categories(const PipelineOptions& opts, const std::filesystem::path& votes,
                    const std::filesystem::path& dataset, const std::string& output);

// Inputs are (label, report path); a report is recognized as a rating report
// by its elo columns and as a metric report otherwise. The model order is the
// row order of the first input.
void run_correlate(const PipelineOptions& opts,
                   const std::vector<std::pair<std::string, std::filesystem::path>>& inputs,
                   const std::string& output);

struct ReportInputs {
  std::filesystem::path dataset;
  std::vector<std::filesystem::path> responses;
  std::filesystem::path votes;
  std::optional<std::filesystem::path> general_dataset;
  std::vector<std::filesystem::path> general_responses;
};

// Writes metrics_<name>, ratings, summary_<name>, categories and correlations
// tables plus elo_ci.svg and categories.svg into `out_dir`. Returns the paths
// written.
std::vector<std::filesystem::path> run_report(const PipelineOptions& opts,
                                              const ReportInputs& inputs,
                                              const std::filesystem::path& out_dir);

}  // namespace arena
