#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/analysis.hpp"
#include "arena/rating.hpp"

namespace arena {

// kTable is tab-separated text with a header row; kJson is a single JSON
// document.
enum class OutputFormat { kTable, kJson };

std::optional<OutputFormat> parse_output_format(std::string_view s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_tsv() const;
  // Index of `column` in the header, or npos.
  std::size_t column(std::string_view name) const;
};

// Throws kParse on ragged rows or an empty file.
Table parse_tsv(std::string_view text);

std::string format_number(double v, int decimals = 6);

std::string render(const MetricReport& report, OutputFormat fmt);
std::string render(const RatingReport& report, OutputFormat fmt);
std::string render(const CategoryBreakdown& breakdown, OutputFormat fmt);
std::string render(const CorrelationMatrix& matrix, OutputFormat fmt);

// The summary table with columns Model, Cos, R-1, R-2, R-L and, when ratings
// are given, ELO and WP. ELO is the permutation mean rounded to an integer;
// WP is a percentage with two decimals.
std::string render_summary(const MetricReport& metrics, const RatingReport* ratings,
                           std::span<const std::string> models, OutputFormat fmt);

// Reads a report previously written by `render` in either format.
MetricReport read_metric_report(const std::filesystem::path& path);
RatingReport read_rating_report(const std::filesystem::path& path);

// "-" or empty writes to stdout; anything else is written atomically.
void write_output(const std::string& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace arena
