#pragma once

// Per-study effect sizes and pooled outcome estimates.
//
// Estimators follow the RevMan defaults:
//   dichotomous  RR / OR / RD, Mantel-Haenszel or inverse variance
//   continuous   MD / SMD (Hedges' g), inverse variance
//   random effects via DerSimonian-Laird.
//
// Zero cells: for RR/OR a study with no events in either arm is not
// estimable and never enters a pool; any other study with a zero cell gets
// 0.5 added to all four cells. RD uses the raw counts.

#include <set>
#include <span>
#include <string>
#include <vector>

#include "oeval/evidence.hpp"

namespace oeval {

struct StudyEffect {
    std::string study_id;
    double point = 0.0;              // natural scale
    bool log_scale = false;          // true for RR/OR
    double transformed_point = 0.0;  // ln(point) on the log scale, else point
    double se = 0.0;                 // standard error of transformed_point
    bool estimable = false;
};

struct StudyWeight {
    std::string study_id;
    double weight = 0.0;  // fraction of the total, sums to 1 over the pool
};

struct PooledOutcome {
    EffectMeasure measure = EffectMeasure::RR;
    double estimate = 0.0;  // natural scale
    double ci_low = 0.0;
    double ci_high = 0.0;
    double transformed_estimate = 0.0;
    double se = 0.0;  // of transformed_estimate
    // One entry per contributing row, in row order. A study that appears in
    // two subgroups contributes two entries.
    std::vector<StudyWeight> weights;
    std::size_t n_studies = 0;
    bool estimable = false;
    double q = 0.0;     // Cochran's Q
    double tau2 = 0.0;  // between-study variance
    double i2 = 0.0;    // fraction in [0, 1]
};

struct ToleranceConfig {
    double rel_tol = 1e-5;
    double abs_tol = 1e-6;
};

// Two-sided standard normal multiplier for a confidence level. 0.95 maps to
// the pinned constant 1.959964; other levels use the normal quantile.
double z_for_level(double ci_level);

inline constexpr double kZ95 = 1.959964;

StudyEffect study_effect_dichotomous(const DichotomousArms& arms, EffectMeasure measure,
                                     std::string study_id = {});
StudyEffect study_effect_continuous(const ContinuousArms& arms, EffectMeasure measure,
                                    std::string study_id = {});
StudyEffect study_effect(const StudyRow& row, EffectMeasure measure);

struct DichotomousStratum {
    std::string study_id;
    DichotomousArms arms;
};

// Fixed-effect Mantel-Haenszel pool. CI from the Greenland-Robins variance
// (RR/OR, log scale) or the Greenland-Robins RD variance. Q and I² are
// computed around the MH estimate with inverse-variance study weights.
PooledOutcome pool_mantel_haenszel(std::span<const DichotomousStratum> rows, EffectMeasure measure,
                                   double ci_level = 0.95);

// Inverse-variance pool of precomputed study effects. Non-estimable effects
// and effects with se == 0 are ignored.
PooledOutcome pool_inverse_variance(std::span<const StudyEffect> effects, EffectMeasure measure,
                                    Model model, double ci_level = 0.95);

Interval confidence_interval(double transformed_point, double se, double ci_level, bool log_scale);

// Pools every row of `outcome` (all subgroups merged) whose study id is in
// `included_studies`, with the outcome's declared measure, method, model and
// CI level. Mantel-Haenszel with a random-effects model falls back to
// DerSimonian-Laird over inverse-variance study effects.
PooledOutcome pool_outcome(const Outcome& outcome, const std::set<std::string>& included_studies);

// Pools every row.
PooledOutcome pool_outcome(const Outcome& outcome);

// Per-row effects for all rows of an outcome, in row order.
std::vector<StudyEffect> study_effects(const Outcome& outcome);

}  // namespace oeval
