#include "oeval/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "oeval/error.hpp"
#include "oeval/run_evaluation.hpp"

namespace oeval {

std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoInput> points) {
    std::vector<ParetoPoint> out;
    if (points.empty()) return out;

    const auto [min_it, max_it] = std::minmax_element(
        points.begin(), points.end(),
        [](const ParetoInput& a, const ParetoInput& b) { return a.y_raw < b.y_raw; });
    const double lo = min_it->y_raw, span = max_it->y_raw - lo;

    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back({p.run_tag, p.x, p.y_raw, span > 0.0 ? (p.y_raw - lo) / span : 0.0, false});

    // Sweep in x order. Within one x, anything above the group minimum is
    // dominated by that minimum; the minimum itself is dominated iff some
    // point with a smaller x reaches a y at least as low.
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (out[a].x != out[b].x) return out[a].x < out[b].x;
        return out[a].y_raw < out[b].y_raw;
    });

    double best_before = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && out[order[j]].x == out[order[i]].x) ++j;
        const double group_min = out[order[i]].y_raw;
        for (std::size_t g = i; g < j; ++g) {
            auto& p = out[order[g]];
            p.dominated = p.y_raw > group_min || best_before <= p.y_raw;
        }
        best_before = std::min(best_before, group_min);
        i = j;
    }
    return out;
}

std::vector<ParetoPoint> frontier_of(std::span<const ParetoPoint> points) {
    std::vector<ParetoPoint> front;
    for (const auto& p : points)
        if (!p.dominated) front.push_back(p);
    std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.run_tag < b.run_tag;
    });
    return front;
}

std::vector<ParetoInput> pareto_inputs(std::span<const RunEvaluation> evaluations, double cutoff) {
    std::vector<ParetoInput> inputs;
    for (const auto& ev : evaluations) {
        const CutoffEvaluation* at = ev.at_cutoff(cutoff);
        if (!at) throw ConfigError("run " + ev.run_tag + " was not evaluated at the Pareto cutoff");
        inputs.push_back({ev.run_tag, at->aggregate.n_missing, at->aggregate.sum_mod_estimable});
    }
    return inputs;
}

}  // namespace oeval
