#pragma once

// Two-objective Pareto analysis of runs: number of non-estimable outcomes
// (x) against the summed relative difference of estimable outcomes (y).
// Both are minimised.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace oeval {

struct RunEvaluation;

struct ParetoInput {
    std::string run_tag;
    std::size_t x = 0;
    double y_raw = 0.0;
};

struct ParetoPoint {
    std::string run_tag;
    std::size_t x = 0;
    double y_raw = 0.0;
    double y = 0.0;  // min-max normalised y_raw
    bool dominated = false;
};

// Every input point, in input order, with normalised y and its dominance
// flag. Dominance is weak-weak with at least one strict inequality, so
// duplicate points do not dominate each other.
std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoInput> points);

// Non-dominated points sorted by (x, y, tag).
std::vector<ParetoPoint> frontier_of(std::span<const ParetoPoint> points);

// One input per evaluation at the given cutoff. The caller adds the gold
// evaluation if it should anchor the normalisation.
std::vector<ParetoInput> pareto_inputs(std::span<const RunEvaluation> evaluations, double cutoff);

}  // namespace oeval
