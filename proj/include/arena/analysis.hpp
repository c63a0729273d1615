#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/corpus.hpp"
#include "arena/embedding.hpp"
#include "arena/rating.hpp"

namespace arena {

struct MetricRow {
  std::string model;
  double cos_mean = 0.0;
  double rouge1_f1_mean = 0.0;
  double rouge2_f1_mean = 0.0;
  double rougeL_f1_mean = 0.0;
  std::size_t scored_count = 0;
  std::size_t skipped_count = 0;
};

// Per-model means over one dataset. ROUGE means are taken over every record
// that has a reference answer, with missing or blank responses counted as 0.
// The cosine mean covers scored records only (reference and non-blank
// response); scored_count + skipped_count equals the dataset size.
struct MetricReport {
  std::string dataset_name;
  std::vector<MetricRow> rows;

  const MetricRow* find(std::string_view model) const;
};

// Per-record metrics for one (response, reference) pair; exposed so callers
// can audit a report.
struct RecordScores {
  double rouge1_f1 = 0.0;
  double rouge2_f1 = 0.0;
  double rougeL_f1 = 0.0;
};
RecordScores score_text(std::string_view response, std::string_view reference);

// Throws kNoReferenceAnswers when no record carries a reference answer and
// kInvalidArgument when a set targets another dataset.
MetricReport score_models(const EvalDataset& dataset,
                          std::span<const ResponseSet> sets, Embedder& embedder,
                          std::size_t jobs = 0);

struct CategoryCell {
  std::string model;
  std::string category;
  double winpct = 0.0;
  std::size_t vote_count = 0;
  std::size_t win = 0;
  std::size_t both = 0;
};

// Cells exist only for (model, category) combinations that received votes.
// Categories follow the dataset's order of first appearance and models are
// sorted within each category.
struct CategoryBreakdown {
  std::vector<std::string> categories;
  std::vector<CategoryCell> cells;

  const CategoryCell* find(std::string_view model, std::string_view category) const;
};

// Partitions votes by the category of their record and applies winpct within
// each partition. Throws kUnknownId for a record missing from the dataset or
// carrying no category.
CategoryBreakdown category_winpct(std::span<const Vote> votes,
                                  const EvalDataset& dataset);

enum class CorrelationMethod { kPearson, kSpearman };

// std::nullopt when either side is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based), ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> x);

struct MetricColumn {
  std::string name;
  std::vector<double> values;  // one per model, in a shared model order
};

struct CorrelationMatrix {
  std::vector<std::string> metric_names;
  // entries[i][j]; std::nullopt marks an undefined (constant-column) entry.
  std::vector<std::vector<std::optional<double>>> entries;
};

// Pairwise correlations of equally long columns. Throws kTooFewModels when the
// columns have fewer than 3 values and kIncompleteColumn on ragged input.
CorrelationMatrix metric_correlations(std::span<const MetricColumn> columns,
                                      CorrelationMethod method = CorrelationMethod::kPearson);

// Builds the labeled column set "<label> Cos", "<label> R-1", "<label> R-2",
// "<label> R-L" from a metric report, and "<label> ELO", "<label> WP" from a
// rating report, for the given model order. Throws kIncompleteColumn when a
// model is missing from a report.
void append_metric_columns(std::vector<MetricColumn>& columns, std::string_view label,
                           const MetricReport& report,
                           std::span<const std::string> models);
void append_rating_columns(std::vector<MetricColumn>& columns, std::string_view label,
                           const RatingReport& report,
                           std::span<const std::string> models);

}  // namespace arena
