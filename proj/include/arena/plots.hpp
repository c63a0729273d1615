#pragma once

#include <string>

#include "arena/analysis.hpp"
#include "arena/rating.hpp"

namespace arena {

// Horizontal interval chart: one row per model sorted by elo_mean (highest
// first), a dot at the mean and a bar spanning [ci_low, ci_high].
std::string render_elo_svg(const RatingReport& report, const std::string& title);

// Grouped bar chart of per-category WinPct, one group per category.
std::string render_category_svg(const CategoryBreakdown& breakdown,
                                 const std::string& title);

}  // namespace arena
