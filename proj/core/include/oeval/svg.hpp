#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "oeval/evidence.hpp"
#include "oeval/meta_analysis.hpp"
#include "oeval/pareto.hpp"

namespace oeval {

// Forest plot: one row per study row (restricted to `included` when given)
// with arm data, weight, effect and CI whiskers, then a total row with the
// pooled diamond or "Not estimable".
std::string render_forest_svg(const Outcome& outcome, const PooledOutcome& pooled,
                              const std::set<std::string>* included = nullptr);

struct BoxSeries {
    std::string label;
    std::vector<double> values;
};

// Horizontal box plots (min/Q1/median/Q3/max whiskers, mean as a circle).
// Values above `axis_clamp` are drawn at the clamp.
std::string render_box_plot_svg(const std::string& title, std::span<const BoxSeries> series,
                                std::optional<double> axis_clamp = std::nullopt);

// Scatter of Pareto points; frontier points filled and joined, dominated
// points hollow.
std::string render_pareto_svg(std::span<const ParetoPoint> points);

}  // namespace oeval
