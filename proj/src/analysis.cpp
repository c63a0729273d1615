#include "arena/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "arena/error.hpp"
#include "arena/jsonl.hpp"
#include "arena/parallel.hpp"

namespace arena {

const MetricRow* MetricReport::find(std::string_view model) const {
  for (const auto& r : rows) {
    if (r.model == model) return &r;
  }
  return nullptr;
}

RecordScores score_text(std::string_view response, std::string_view reference) {
  const TokenSequence cand = tokenize(response);
  const TokenSequence ref = tokenize(reference);
  return {rouge_n(cand, ref, 1).f1, rouge_n(cand, ref, 2).f1, rouge_l(cand, ref).f1};
}

MetricReport score_models(const EvalDataset& dataset,
                          std::span<const ResponseSet> sets, Embedder& embedder,
                          std::size_t jobs) {
  std::vector<const InstructionRecord*> refs;
  for (const auto& r : dataset.records()) {
    if (r.reference_answer) refs.push_back(&r);
  }
  if (refs.empty()) {
    throw Error(ErrorCode::kNoReferenceAnswers,
                "dataset '" + dataset.name() + "' has no reference answers");
  }
  for (const auto& s : sets) {
    if (s.dataset_name != dataset.name()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "response set for '" + s.model_name + "' targets dataset '" +
                      s.dataset_name + "'");
    }
  }

  // One task per (model, reference record); a null response means skipped.
  struct Task {
    const std::string* response = nullptr;
    const std::string* reference = nullptr;
    RecordScores scores;
    double cosine = 0.0;
  };
  const std::size_t per_model = refs.size();
  std::vector<Task> tasks(sets.size() * per_model);
  std::vector<std::string> to_embed;
  for (std::size_t m = 0; m < sets.size(); ++m) {
    for (std::size_t k = 0; k < per_model; ++k) {
      Task& t = tasks[m * per_model + k];
      t.reference = &*refs[k]->reference_answer;
      const std::string* resp = sets[m].response_for(refs[k]->id);
      if (resp != nullptr && !trim(*resp).empty()) {
        t.response = resp;
        to_embed.push_back(*resp);
        to_embed.push_back(*t.reference);
      }
    }
  }

  const std::vector<EmbeddingVector> vectors = embedder.embed_all(to_embed);
  {
    std::size_t v = 0;
    for (auto& t : tasks) {
      if (t.response == nullptr) continue;
      t.cosine = cosine_similarity(vectors[v], vectors[v + 1]);
      v += 2;
    }
  }

  parallel_for(tasks.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Task& t = tasks[i];
      if (t.response != nullptr) t.scores = score_text(*t.response, *t.reference);
    }
  });

  MetricReport report;
  report.dataset_name = dataset.name();
  for (std::size_t m = 0; m < sets.size(); ++m) {
    MetricRow row;
    row.model = sets[m].model_name;
    double cos = 0.0, r1 = 0.0, r2 = 0.0, rl = 0.0;
    for (std::size_t k = 0; k < per_model; ++k) {
      const Task& t = tasks[m * per_model + k];
      if (t.response == nullptr) continue;
      ++row.scored_count;
      cos += t.cosine;
      r1 += t.scores.rouge1_f1;
      r2 += t.scores.rouge2_f1;
      rl += t.scores.rougeL_f1;
    }
    const auto n_ref = static_cast<double>(per_model);
    row.rouge1_f1_mean = r1 / n_ref;
    row.rouge2_f1_mean = r2 / n_ref;
    row.rougeL_f1_mean = rl / n_ref;
    row.cos_mean = row.scored_count > 0 ? cos / static_cast<double>(row.scored_count) : 0.0;
    row.skipped_count = dataset.size() - row.scored_count;
    report.rows.push_back(std::move(row));
  }
  return report;
}

const CategoryCell* CategoryBreakdown::find(std::string_view model,
                                            std::string_view category) const {
  for (const auto& c : cells) {
    if (c.model == model && c.category == category) return &c;
  }
  return nullptr;
}

CategoryBreakdown category_winpct(std::span<const Vote> votes,
                                  const EvalDataset& dataset) {
  std::map<std::string, std::vector<Vote>> partitions;
  for (const auto& v : votes) {
    const InstructionRecord* r = dataset.find(v.record_id);
    if (r == nullptr || r->category.empty()) {
      throw Error(ErrorCode::kUnknownId,
                  "vote '" + v.vote_id + "' references record '" + v.record_id +
                      "' with no category in dataset '" + dataset.name() + "'");
    }
    partitions[r->category].push_back(v);
  }
  CategoryBreakdown out;
  for (const auto& category : dataset.categories()) {
    auto it = partitions.find(category);
    if (it == partitions.end()) continue;
    out.categories.push_back(category);
    for (const auto& model : models_in(it->second)) {
      const WinCounts c = win_counts(it->second, model);
      CategoryCell cell;
      cell.model = model;
      cell.category = category;
      cell.vote_count = c.total;
      cell.win = c.win;
      cell.both = c.both;
      cell.winpct = winpct(it->second, model);
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kIncompleteColumn, "correlated columns differ in length");
  }
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

CorrelationMatrix metric_correlations(std::span<const MetricColumn> columns,
                                      CorrelationMethod method) {
  if (columns.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no metric columns to correlate");
  }
  const std::size_t n = columns.front().values.size();
  for (const auto& c : columns) {
    if (c.values.size() != n) {
      throw Error(ErrorCode::kIncompleteColumn,
                  "column '" + c.name + "' has " + std::to_string(c.values.size()) +
                      " values, expected " + std::to_string(n));
    }
  }
  if (n < 3) {
    throw Error(ErrorCode::kTooFewModels,
                "correlation needs at least 3 models, got " + std::to_string(n));
  }
  CorrelationMatrix out;
  const std::size_t k = columns.size();
  out.entries.assign(k, std::vector<std::optional<double>>(k));
  for (const auto& c : columns) out.metric_names.push_back(c.name);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::optional<double> r =
          method == CorrelationMethod::kPearson
              ? pearson(columns[i].values, columns[j].values)
              : spearman(columns[i].values, columns[j].values);
      // Unit diagonal for every non-constant column.
      if (i == j && r) r = 1.0;
      out.entries[i][j] = r;
      out.entries[j][i] = r;
    }
  }
  return out;
}

void append_metric_columns(std::vector<MetricColumn>& columns, std::string_view label,
                           const MetricReport& report,
                           std::span<const std::string> models) {
  const std::string prefix = label.empty() ? "" : std::string(label) + " ";
  MetricColumn cos{prefix + "Cos", {}}, r1{prefix + "R-1", {}}, r2{prefix + "R-2", {}},
      rl{prefix + "R-L", {}};
  for (const auto& m : models) {
    const MetricRow* row = report.find(m);
    if (row == nullptr) {
      throw Error(ErrorCode::kIncompleteColumn,
                  "model '" + m + "' missing from metric report '" +
                      report.dataset_name + "'");
    }
    cos.values.push_back(row->cos_mean);
    r1.values.push_back(row->rouge1_f1_mean);
    r2.values.push_back(row->rouge2_f1_mean);
    rl.values.push_back(row->rougeL_f1_mean);
  }
  for (auto* c : {&cos, &r1, &r2, &rl}) columns.push_back(std::move(*c));
}

void append_rating_columns(std::vector<MetricColumn>& columns, std::string_view label,
                           const RatingReport& report,
                           std::span<const std::string> models) {
  const std::string prefix = label.empty() ? "" : std::string(label) + " ";
  MetricColumn elo{prefix + "ELO", {}}, wp{prefix + "WP", {}};
  for (const auto& m : models) {
    const RatingRow* row = report.find(m);
    if (row == nullptr) {
      throw Error(ErrorCode::kIncompleteColumn,
                  "model '" + m + "' missing from rating report");
    }
    elo.values.push_back(row->elo_mean);
    wp.values.push_back(row->winpct);
  }
  columns.push_back(std::move(elo));
  columns.push_back(std::move(wp));
}

}  // namespace arena
