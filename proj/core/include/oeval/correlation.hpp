#pragma once

#include <span>
#include <string>
#include <vector>

namespace oeval {

struct RunEvaluation;

double pearson(std::span<const double> x, std::span<const double> y);
// Pearson on average ranks (ties share the mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct MeasureCorrelation {
    std::string measure;
    std::vector<std::string> run_tags;
    std::vector<double> measure_values;  // per run, mean over topics
    std::vector<double> mean_mod;        // per run, at the cutoff
    double pearson = 0.0;
    double spearman = 0.0;
    LinearFit fit;  // mean_mod ~ measure
};

// Pairs every traditional measure with mean_mod at `cutoff` across the
// non-baseline runs.
std::vector<MeasureCorrelation> correlate_measures(std::span<const RunEvaluation> evaluations,
                                                   double cutoff);

}  // namespace oeval
