#pragma once

// Comparing a recomputed (predicted) outcome against the original one along
// five aspects: magnitude of difference, distance from the original CI,
// over/underestimation, sign, and estimability.

#include <optional>
#include <span>
#include <string_view>

#include "oeval/meta_analysis.hpp"

namespace oeval {

enum class EstimateClass { Equal, Overestimated, Underestimated, NotEstimable };
enum class SignMatch { Same, Different, NotEstimable };

std::string_view to_string(EstimateClass c) noexcept;
std::string_view to_string(SignMatch s) noexcept;

struct AspectReport {
    double mod = 0.0;                 // relative difference, fraction >= 0
    std::optional<double> delta_ci;   // empty when the prediction is not estimable
    EstimateClass estimate_class = EstimateClass::NotEstimable;
    SignMatch sign_match = SignMatch::NotEstimable;
    bool estimable = false;
};

// |original - predicted| / |original|. Zero original: 0 if the prediction is
// also zero, else 1. A missing prediction scores 1.
double magnitude_of_difference(double original, std::optional<double> predicted);

double distance_from_ci(double predicted, double ci_low, double ci_high);

EstimateClass classify_estimate(double original, double predicted, const ToleranceConfig& tol = {});

// Signs are taken relative to the measure's null value. A value exactly at
// the null matches either side.
SignMatch sign_agreement(double original, double predicted, EffectMeasure measure);

// Requires original.estimable.
AspectReport aspect_report(const PooledOutcome& original, const PooledOutcome& predicted,
                           const ToleranceConfig& tol = {});

struct AggregateTable {
    double mean_mod = 0.0;
    double mean_delta_ci = 0.0;
    std::size_t n_equal = 0;
    std::size_t n_over = 0;
    std::size_t n_under = 0;
    std::size_t n_same_sign = 0;
    std::size_t n_diff_sign = 0;
    std::size_t n_reported = 0;
    std::size_t n_missing = 0;
    std::size_t n_total = 0;
    double sum_mod_estimable = 0.0;  // Σ mod over estimable reports

    std::size_t n_different() const noexcept { return n_over + n_under; }
    bool consistent() const noexcept;
};

AggregateTable aggregate(std::span<const AspectReport> reports);

// Element-wise mean of several tables (e.g. over simulation seeds); counts
// become reals.
struct MeanAggregate {
    double mean_mod = 0.0;
    double mean_delta_ci = 0.0;
    double n_equal = 0.0;
    double n_over = 0.0;
    double n_under = 0.0;
    double n_same_sign = 0.0;
    double n_diff_sign = 0.0;
    double n_reported = 0.0;
    double n_missing = 0.0;
    double n_total = 0.0;
};

MeanAggregate mean_of(std::span<const AggregateTable> tables);

}  // namespace oeval
