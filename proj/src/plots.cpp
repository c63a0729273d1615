#include "arena/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace arena {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                    "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                    "#9c755f", "#bab0ac", "#1f77b4"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string render_elo_svg(const RatingReport& report, const std::string& title) {
  std::vector<RatingRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RatingRow& a, const RatingRow& b) { return a.elo_mean > b.elo_mean; });
  double lo = 1e300, hi = -1e300;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ci_low);
    hi = std::max(hi, r.ci_high);
  }
  if (rows.empty()) lo = hi = 1000.0;
  const double pad = std::max(10.0, (hi - lo) * 0.1);
  lo -= pad;
  hi += pad;

  const double left = 220, right = 40, top = 50, row_h = 28, plot_w = 520;
  const double height = top + row_h * static_cast<double>(rows.size()) + 50;
  const double width = left + plot_w + right;
  auto x_of = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                    "\" height=\"" + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape_xml(title) + "</text>\n";
  const double axis_y = top + row_h * static_cast<double>(rows.size()) + 5;
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(axis_y) + "\" x2=\"" + num(left + plot_w) +
         "\" y2=\"" + num(axis_y) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    svg += "<text x=\"" + num(x_of(v)) + "\" y=\"" + num(axis_y + 16) +
           "\" text-anchor=\"middle\">" + num(std::round(v)) + "</text>\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double y = top + row_h * (static_cast<double>(i) + 0.5);
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           escape_xml(r.model) + "</text>\n";
    svg += "<line x1=\"" + num(x_of(r.ci_low)) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(x_of(r.ci_high)) + "\" y2=\"" + num(y) +
           "\" stroke=\"#4e79a7\" stroke-width=\"4\"/>\n";
    svg += "<circle cx=\"" + num(x_of(r.elo_mean)) + "\" cy=\"" + num(y) +
           "\" r=\"4\" fill=\"#e15759\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_category_svg(const CategoryBreakdown& breakdown,
                                const std::string& title) {
  std::set<std::string> model_set;
  for (const auto& c : breakdown.cells) model_set.insert(c.model);
  const std::vector<std::string> models(model_set.begin(), model_set.end());

  const double left = 60, top = 50, plot_h = 260, bar_w = 14, gap = 24;
  const double group_w = bar_w * static_cast<double>(std::max<std::size_t>(1, models.size())) + gap;
  const double plot_w = group_w * static_cast<double>(std::max<std::size_t>(1, breakdown.categories.size()));
  const double width = left + plot_w + 180;
  const double height = top + plot_h + 90;
  const double base = top + plot_h;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                    "\" height=\"" + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape_xml(title) + "</text>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(base) + "\" x2=\"" + num(left + plot_w) +
         "\" y2=\"" + num(base) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = base - plot_h * k / 4.0;
    svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           num(25.0 * k) + "</text>\n";
  }
  for (std::size_t g = 0; g < breakdown.categories.size(); ++g) {
    const auto& cat = breakdown.categories[g];
    const double gx = left + group_w * static_cast<double>(g) + gap / 2;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const CategoryCell* cell = breakdown.find(models[m], cat);
      if (cell == nullptr) continue;
      const double h = plot_h * cell->winpct;
      svg += "<rect x=\"" + num(gx + bar_w * static_cast<double>(m)) + "\" y=\"" + num(base - h) +
             "\" width=\"" + num(bar_w - 2) + "\" height=\"" + num(h) + "\" fill=\"" +
             kPalette[m % std::size(kPalette)] + "\"/>\n";
    }
    svg += "<text x=\"" + num(gx + (group_w - gap) / 2) + "\" y=\"" + num(base + 16) +
           "\" text-anchor=\"middle\">" + escape_xml(cat) + "</text>\n";
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    const double y = top + 16.0 * static_cast<double>(m);
    svg += "<rect x=\"" + num(left + plot_w + 20) + "\" y=\"" + num(y) +
           "\" width=\"10\" height=\"10\" fill=\"" + kPalette[m % std::size(kPalette)] + "\"/>\n";
    svg += "<text x=\"" + num(left + plot_w + 36) + "\" y=\"" + num(y + 9) + "\">" +
           escape_xml(models[m]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace arena
