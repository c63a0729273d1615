#include "arena/tables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "arena/error.hpp"
#include "arena/jsonl.hpp"

namespace arena {

namespace {

Json number_or_null(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "column '" + what + "': not a number: '" + s + "'");
  }
}

std::size_t to_count(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v < 0 || v != std::floor(v)) {
    throw Error(ErrorCode::kParse, "column '" + what + "': not a count: '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

bool looks_like_json(std::string_view text) {
  const auto t = trim(text);
  return !t.empty() && (t.front() == '{' || t.front() == '[');
}

std::size_t require_column(const Table& t, std::string_view name,
                           const std::filesystem::path& path) {
  const std::size_t c = t.column(name);
  if (c == std::string::npos) {
    throw Error(ErrorCode::kParse,
                path.string() + ": missing column '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view s) {
  if (s == "table" || s == "tsv") return OutputFormat::kTable;
  if (s == "json") return OutputFormat::kJson;
  return std::nullopt;
}

std::string Table::to_tsv() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += row[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::string::npos;
}

Table parse_tsv(std::string_view text) {
  Table t;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.emplace_back(line.substr(start, tab == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (t.header.empty()) {
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size()) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected " +
                                           std::to_string(t.header.size()) + " fields");
      }
      t.rows.push_back(std::move(fields));
    }
  }
  if (t.header.empty()) throw Error(ErrorCode::kParse, "empty table");
  return t;
}

std::string format_number(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // Avoid printing "-0.000000".
  if (buf[0] == '-') {
    bool zero = true;
    for (const char* p = buf + 1; *p; ++p) zero = zero && (*p == '0' || *p == '.');
    if (zero) return std::string(buf + 1);
  }
  return buf;
}

std::string render(const MetricReport& report, OutputFormat fmt) {
  if (fmt == OutputFormat::kJson) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"model", r.model},
                      {"cos_mean", r.cos_mean},
                      {"rouge1_f1_mean", r.rouge1_f1_mean},
                      {"rouge2_f1_mean", r.rouge2_f1_mean},
                      {"rougeL_f1_mean", r.rougeL_f1_mean},
                      {"scored_count", r.scored_count},
                      {"skipped_count", r.skipped_count}});
    }
    return Json{{"dataset_name", report.dataset_name}, {"rows", rows}}.dump(2) + "\n";
  }
  Table t{{"dataset", "model", "cos_mean", "rouge1_f1_mean", "rouge2_f1_mean",
           "rougeL_f1_mean", "scored_count", "skipped_count"},
          {}};
  for (const auto& r : report.rows) {
    t.rows.push_back({report.dataset_name, r.model, format_number(r.cos_mean),
                      format_number(r.rouge1_f1_mean), format_number(r.rouge2_f1_mean),
                      format_number(r.rougeL_f1_mean), std::to_string(r.scored_count),
                      std::to_string(r.skipped_count)});
  }
  return t.to_tsv();
}

std::string render(const RatingReport& report, OutputFormat fmt) {
  if (fmt == OutputFormat::kJson) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"model", r.model},
                      {"elo_sequential", r.elo_sequential},
                      {"elo_mean", r.elo_mean},
                      {"ci_low", r.ci_low},
                      {"ci_high", r.ci_high},
                      {"winpct", r.winpct},
                      {"vote_count", r.vote_count}});
    }
    return Json{{"permutations", report.permutations}, {"rows", rows}}.dump(2) + "\n";
  }
  Table t{{"model", "elo_sequential", "elo_mean", "ci_low", "ci_high", "winpct",
           "vote_count"},
          {}};
  for (const auto& r : report.rows) {
    t.rows.push_back({r.model, format_number(r.elo_sequential), format_number(r.elo_mean),
                      format_number(r.ci_low), format_number(r.ci_high),
                      format_number(r.winpct), std::to_string(r.vote_count)});
  }
  return t.to_tsv();
}

std::string render(const CategoryBreakdown& breakdown, OutputFormat fmt) {
  if (fmt == OutputFormat::kJson) {
    Json cells = Json::array();
    for (const auto& c : breakdown.cells) {
      cells.push_back({{"model", c.model},
                       {"category", c.category},
                       {"winpct", c.winpct},
                       {"vote_count", c.vote_count}});
    }
    return Json{{"categories", breakdown.categories}, {"cells", cells}}.dump(2) + "\n";
  }
  Table t{{"category", "model", "winpct", "vote_count"}, {}};
  for (const auto& c : breakdown.cells) {
    t.rows.push_back({c.category, c.model, format_number(c.winpct),
                      std::to_string(c.vote_count)});
  }
  return t.to_tsv();
}

std::string render(const CorrelationMatrix& matrix, OutputFormat fmt) {
  if (fmt == OutputFormat::kJson) {
    Json entries = Json::array();
    for (const auto& row : matrix.entries) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back(number_or_null(e));
      entries.push_back(std::move(r));
    }
    return Json{{"metric_names", matrix.metric_names}, {"entries", entries}}.dump(2) + "\n";
  }
  Table t;
  t.header.push_back("metric");
  for (const auto& n : matrix.metric_names) t.header.push_back(n);
  for (std::size_t i = 0; i < matrix.entries.size(); ++i) {
    std::vector<std::string> row{matrix.metric_names[i]};
    for (const auto& e : matrix.entries[i]) row.push_back(e ? format_number(*e) : "NA");
    t.rows.push_back(std::move(row));
  }
  return t.to_tsv();
}

std::string render_summary(const MetricReport& metrics, const RatingReport* ratings,
                           std::span<const std::string> models, OutputFormat fmt) {
  Table t{{"Model", "Cos", "R-1", "R-2", "R-L"}, {}};
  if (ratings) {
    t.header.push_back("ELO");
    t.header.push_back("WP");
  }
  Json rows = Json::array();
  for (const auto& m : models) {
    const MetricRow* mr = metrics.find(m);
    if (mr == nullptr) {
      throw Error(ErrorCode::kIncompleteColumn, "model '" + m + "' has no metric row");
    }
    std::vector<std::string> row{m, format_number(mr->cos_mean, 3),
                                 format_number(mr->rouge1_f1_mean, 3),
                                 format_number(mr->rouge2_f1_mean, 3),
                                 format_number(mr->rougeL_f1_mean, 3)};
    Json j = {{"Model", m},
              {"Cos", mr->cos_mean},
              {"R-1", mr->rouge1_f1_mean},
              {"R-2", mr->rouge2_f1_mean},
              {"R-L", mr->rougeL_f1_mean}};
    if (ratings) {
      const RatingRow* rr = ratings->find(m);
      if (rr == nullptr) {
        throw Error(ErrorCode::kIncompleteColumn, "model '" + m + "' has no rating row");
      }
      row.push_back(format_number(std::round(rr->elo_mean), 0));
      row.push_back(format_number(rr->winpct * 100.0, 2));
      j["ELO"] = rr->elo_mean;
      j["WP"] = rr->winpct * 100.0;
    }
    t.rows.push_back(std::move(row));
    rows.push_back(std::move(j));
  }
  if (fmt == OutputFormat::kJson) {
    return Json{{"dataset_name", metrics.dataset_name}, {"columns", t.header}, {"rows", rows}}
               .dump(2) +
           "\n";
  }
  return t.to_tsv();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

MetricReport read_metric_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  MetricReport report;
  if (looks_like_json(text)) {
    try {
      Json j = Json::parse(text);
      report.dataset_name = j.at("dataset_name").get<std::string>();
      for (const auto& r : j.at("rows")) {
        report.rows.push_back({r.at("model").get<std::string>(),
                               r.at("cos_mean").get<double>(),
                               r.at("rouge1_f1_mean").get<double>(),
                               r.at("rouge2_f1_mean").get<double>(),
                               r.at("rougeL_f1_mean").get<double>(),
                               r.at("scored_count").get<std::size_t>(),
                               r.at("skipped_count").get<std::size_t>()});
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    return report;
  }
  const Table t = parse_tsv(text);
  const auto c_ds = require_column(t, "dataset", path);
  const auto c_model = require_column(t, "model", path);
  const auto c_cos = require_column(t, "cos_mean", path);
  const auto c_r1 = require_column(t, "rouge1_f1_mean", path);
  const auto c_r2 = require_column(t, "rouge2_f1_mean", path);
  const auto c_rl = require_column(t, "rougeL_f1_mean", path);
  const auto c_sc = require_column(t, "scored_count", path);
  const auto c_sk = require_column(t, "skipped_count", path);
  for (const auto& r : t.rows) {
    report.dataset_name = r[c_ds];
    report.rows.push_back({r[c_model], to_double(r[c_cos], "cos_mean"),
                           to_double(r[c_r1], "rouge1_f1_mean"),
                           to_double(r[c_r2], "rouge2_f1_mean"),
                           to_double(r[c_rl], "rougeL_f1_mean"),
                           to_count(r[c_sc], "scored_count"),
                           to_count(r[c_sk], "skipped_count")});
  }
  return report;
}

RatingReport read_rating_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  RatingReport report;
  if (looks_like_json(text)) {
    try {
      Json j = Json::parse(text);
      report.permutations = j.value("permutations", std::size_t{0});
      for (const auto& r : j.at("rows")) {
        report.rows.push_back({r.at("model").get<std::string>(),
                               r.at("elo_sequential").get<double>(),
                               r.at("elo_mean").get<double>(),
                               r.at("ci_low").get<double>(),
                               r.at("ci_high").get<double>(),
                               r.at("winpct").get<double>(),
                               r.at("vote_count").get<std::size_t>()});
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    return report;
  }
  const Table t = parse_tsv(text);
  const auto c_model = require_column(t, "model", path);
  const auto c_seq = require_column(t, "elo_sequential", path);
  const auto c_mean = require_column(t, "elo_mean", path);
  const auto c_lo = require_column(t, "ci_low", path);
  const auto c_hi = require_column(t, "ci_high", path);
  const auto c_wp = require_column(t, "winpct", path);
  const auto c_n = require_column(t, "vote_count", path);
  for (const auto& r : t.rows) {
    report.rows.push_back({r[c_model], to_double(r[c_seq], "elo_sequential"),
                           to_double(r[c_mean], "elo_mean"), to_double(r[c_lo], "ci_low"),
                           to_double(r[c_hi], "ci_high"), to_double(r[c_wp], "winpct"),
                           to_count(r[c_n], "vote_count")});
  }
  return report;
}

void write_output(const std::string& path, std::string_view content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  write_file_atomically(path, content);
}

}  // namespace arena
