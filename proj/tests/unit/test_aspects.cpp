#include <gtest/gtest.h>

#include <random>

#include "oeval/aspects.hpp"

using namespace oeval;

namespace {

PooledOutcome pooled(double estimate, double low, double high, EffectMeasure m = EffectMeasure::RR) {
    PooledOutcome p;
    p.measure = m;
    p.estimate = estimate;
    p.ci_low = low;
    p.ci_high = high;
    p.estimable = true;
    return p;
}

PooledOutcome missing(EffectMeasure m = EffectMeasure::RR) {
    PooledOutcome p;
    p.measure = m;
    return p;
}

}  // namespace

TEST(Mod, Examples) {
    EXPECT_EQ(magnitude_of_difference(2.0, 1.5), 0.25);
    EXPECT_EQ(magnitude_of_difference(0.0, 0.3), 1.0);
    EXPECT_EQ(magnitude_of_difference(0.0, 0.0), 0.0);
    EXPECT_EQ(magnitude_of_difference(1.7, std::nullopt), 1.0);
    EXPECT_EQ(magnitude_of_difference(-2.0, -1.0), 0.5);
}

TEST(DeltaCi, PiecewiseCases) {
    EXPECT_EQ(distance_from_ci(1.2, 0.8, 2.0), 0.0);
    EXPECT_EQ(distance_from_ci(2.5, 0.8, 2.0), 0.5);
    EXPECT_DOUBLE_EQ(distance_from_ci(0.5, 0.8, 2.0), 0.3);
    EXPECT_EQ(distance_from_ci(0.8, 0.8, 2.0), 0.0);
    EXPECT_EQ(distance_from_ci(2.0, 0.8, 2.0), 0.0);
}

TEST(Classify, ToleranceBoundaries) {
    EXPECT_EQ(classify_estimate(1.0, 1.0 + 1e-7), EstimateClass::Equal);
    EXPECT_EQ(classify_estimate(1.0, 1.1), EstimateClass::Overestimated);
    EXPECT_EQ(classify_estimate(1.0, 0.9), EstimateClass::Underestimated);
    // Relative tolerance dominates for large values, absolute near zero.
    EXPECT_EQ(classify_estimate(1000.0, 1000.009), EstimateClass::Equal);
    EXPECT_EQ(classify_estimate(1000.0, 1000.011), EstimateClass::Overestimated);
    EXPECT_EQ(classify_estimate(0.0, 9e-7), EstimateClass::Equal);
    EXPECT_EQ(classify_estimate(0.0, -2e-6), EstimateClass::Underestimated);
}

TEST(Sign, NullRelative) {
    EXPECT_EQ(sign_agreement(1.5, 0.8, EffectMeasure::RR), SignMatch::Different);
    EXPECT_EQ(sign_agreement(-2.0, -0.1, EffectMeasure::MD), SignMatch::Same);
    EXPECT_EQ(sign_agreement(1.0, 1.3, EffectMeasure::RR), SignMatch::Same);
    EXPECT_EQ(sign_agreement(0.5, 0.8, EffectMeasure::OR), SignMatch::Same);
    EXPECT_EQ(sign_agreement(0.1, -0.1, EffectMeasure::RD), SignMatch::Different);
}

TEST(Sign, TruthTable) {
    // Independent enumeration of the zero-sign convention.
    const double values[] = {0.5, 1.0, 2.0};
    const int signs[] = {-1, 0, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const bool same = signs[i] == 0 || signs[j] == 0 || signs[i] == signs[j];
            EXPECT_EQ(sign_agreement(values[i], values[j], EffectMeasure::RR),
                      same ? SignMatch::Same : SignMatch::Different);
        }
}

TEST(AspectReport, Identity) {
    const auto o = pooled(1.4, 1.1, 1.9);
    const auto r = aspect_report(o, o);
    EXPECT_EQ(r.mod, 0.0);
    EXPECT_EQ(r.delta_ci, 0.0);
    EXPECT_EQ(r.estimate_class, EstimateClass::Equal);
    EXPECT_EQ(r.sign_match, SignMatch::Same);
    EXPECT_TRUE(r.estimable);
}

TEST(AspectReport, NonEstimablePrediction) {
    const auto r = aspect_report(pooled(1.4, 1.1, 1.9), missing());
    EXPECT_EQ(r.mod, 1.0);
    EXPECT_FALSE(r.delta_ci);
    EXPECT_EQ(r.estimate_class, EstimateClass::NotEstimable);
    EXPECT_EQ(r.sign_match, SignMatch::NotEstimable);
    EXPECT_FALSE(r.estimable);
}

TEST(AspectReport, AboveCi) {
    const auto r = aspect_report(pooled(1.4, 1.1, 1.9), pooled(2.0, 1.5, 2.6));
    EXPECT_GT(*r.delta_ci, 0.0);
    EXPECT_EQ(r.estimate_class, EstimateClass::Overestimated);
}

TEST(AspectReport, RejectsNonEstimableOriginal) { EXPECT_ANY_THROW(aspect_report(missing(), missing())); }

TEST(Aggregate, Examples) {
    std::vector<AspectReport> three(3);
    three[0].mod = 0.0;
    three[1].mod = 0.5;
    three[2].mod = 1.0;
    EXPECT_EQ(aggregate(three).mean_mod, 0.5);

    const auto o = pooled(2.0, 1.0, 3.0);
    std::vector<AspectReport> rs{aspect_report(o, o), aspect_report(o, o), aspect_report(o, o),
                                 aspect_report(o, missing())};
    const auto t = aggregate(rs);
    EXPECT_EQ(t.n_equal, 3u);
    EXPECT_EQ(t.n_missing, 1u);
    EXPECT_EQ(t.n_total, 4u);
    EXPECT_EQ(t.mean_mod, 0.25);
    EXPECT_EQ(t.mean_delta_ci, 0.0);
    EXPECT_TRUE(t.consistent());

    const auto empty = aggregate({});
    EXPECT_EQ(empty.n_total, 0u);
    EXPECT_EQ(empty.mean_mod, 0.0);
}

TEST(Aggregate, DeltaCiOnlyOverEstimable) {
    const auto o = pooled(2.0, 1.0, 3.0);
    std::vector<AspectReport> rs{aspect_report(o, pooled(4.0, 3, 5)), aspect_report(o, missing())};
    EXPECT_EQ(aggregate(rs).mean_delta_ci, 1.0);
    EXPECT_EQ(aggregate(rs).sum_mod_estimable, 1.0);
}

TEST(AspectProperty, ModInvariants) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(-50, 50), lam(0.01, 100);
    for (int i = 0; i < 2000; ++i) {
        const double a = v(rng), b = v(rng), l = lam(rng);
        EXPECT_GE(magnitude_of_difference(a, b), 0.0);
        EXPECT_EQ(magnitude_of_difference(a, a), 0.0);
        if (a != 0.0) {
            EXPECT_NEAR(magnitude_of_difference(l * a, l * b), magnitude_of_difference(a, b), 1e-12);
        }
    }
}

TEST(AspectProperty, DeltaCiLipschitzAndZeroInside) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> v(-10, 10);
    for (int i = 0; i < 2000; ++i) {
        double lo = v(rng), hi = v(rng);
        if (lo > hi) std::swap(lo, hi);
        const double p = v(rng), q = v(rng);
        const double d = distance_from_ci(p, lo, hi);
        EXPECT_GE(d, 0.0);
        EXPECT_EQ(d == 0.0, p >= lo && p <= hi);
        EXPECT_LE(std::abs(d - distance_from_ci(q, lo, hi)), std::abs(p - q) + 1e-12);
    }
}

TEST(AspectProperty, ClassificationAntisymmetricAndSignSymmetric) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> v(-3, 3);
    for (int i = 0; i < 2000; ++i) {
        const double a = v(rng), b = (i % 10 == 0) ? a * (1 + 1e-7) : v(rng);
        const auto ab = classify_estimate(a, b), ba = classify_estimate(b, a);
        if (ab == EstimateClass::Overestimated) {
            EXPECT_EQ(ba, EstimateClass::Underestimated);
        }
        if (ab == EstimateClass::Underestimated) {
            EXPECT_EQ(ba, EstimateClass::Overestimated);
        }
        for (auto m : {EffectMeasure::RR, EffectMeasure::MD})
            EXPECT_EQ(sign_agreement(a, b, m), sign_agreement(b, a, m));
        if (ab == EstimateClass::Equal) {
            EXPECT_TRUE(magnitude_of_difference(a, b) <= 1e-5 || std::abs(a - b) <= 1e-6);
        }
    }
}

TEST(AspectProperty, AggregateCountsAlwaysConsistent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> v(0.2, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto o = pooled(1.5, 1.2, 1.9);
        std::vector<AspectReport> rs;
        const int n = static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            switch (rng() % 3) {
                case 0: rs.push_back(aspect_report(o, missing())); break;
                case 1: rs.push_back(aspect_report(o, o)); break;
                default: {
                    const double x = v(rng);
                    rs.push_back(aspect_report(o, pooled(x, x / 2, x * 2)));
                }
            }
        }
        const auto t = aggregate(rs);
        EXPECT_TRUE(t.consistent());
        EXPECT_EQ(t.n_total, rs.size());
        EXPECT_GE(t.mean_mod, 0.0);
    }
}

TEST(MeanOf, AveragesCounts) {
    AggregateTable a, b;
    a.n_equal = 3;
    a.n_total = 4;
    a.mean_mod = 0.2;
    b.n_equal = 4;
    b.n_total = 4;
    const std::vector<AggregateTable> ts{a, b};
    const auto m = mean_of(ts);
    EXPECT_EQ(m.n_equal, 3.5);
    EXPECT_EQ(m.n_total, 4.0);
    EXPECT_DOUBLE_EQ(m.mean_mod, 0.1);
}
