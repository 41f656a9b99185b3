#include "oeval/aspects.hpp"

#include <cmath>

#include "oeval/error.hpp"

namespace oeval {

std::string_view to_string(EstimateClass c) noexcept {
    switch (c) {
        case EstimateClass::Equal: return "equal";
        case EstimateClass::Overestimated: return "overestimated";
        case EstimateClass::Underestimated: return "underestimated";
        case EstimateClass::NotEstimable: return "not_estimable";
    }
    return "?";
}

std::string_view to_string(SignMatch s) noexcept {
    switch (s) {
        case SignMatch::Same: return "same";
        case SignMatch::Different: return "different";
        case SignMatch::NotEstimable: return "not_estimable";
    }
    return "?";
}

double magnitude_of_difference(double original, std::optional<double> predicted) {
    if (!predicted) return 1.0;
    if (original == 0.0) return *predicted == 0.0 ? 0.0 : 1.0;
    return std::abs(original - *predicted) / std::abs(original);
}

double distance_from_ci(double predicted, double ci_low, double ci_high) {
    if (predicted < ci_low) return ci_low - predicted;
    if (predicted > ci_high) return predicted - ci_high;
    return 0.0;
}

EstimateClass classify_estimate(double original, double predicted, const ToleranceConfig& tol) {
    const double diff = std::abs(original - predicted);
    if (diff <= std::max(tol.rel_tol * std::abs(original), tol.abs_tol)) return EstimateClass::Equal;
    return predicted > original ? EstimateClass::Overestimated : EstimateClass::Underestimated;
}

SignMatch sign_agreement(double original, double predicted, EffectMeasure measure) {
    const double null = null_value(measure);
    const auto sign = [null](double x) { return (x > null) - (x < null); };
    const int so = sign(original), sp = sign(predicted);
    if (so == 0 || sp == 0 || so == sp) return SignMatch::Same;
    return SignMatch::Different;
}

AspectReport aspect_report(const PooledOutcome& original, const PooledOutcome& predicted,
                           const ToleranceConfig& tol) {
    if (!original.estimable) throw Error("aspect_report: original outcome is not estimable");
    AspectReport r;
    r.estimable = predicted.estimable;
    if (!predicted.estimable) {
        r.mod = magnitude_of_difference(original.estimate, std::nullopt);
        return r;
    }
    r.mod = magnitude_of_difference(original.estimate, predicted.estimate);
    r.delta_ci = distance_from_ci(predicted.estimate, original.ci_low, original.ci_high);
    r.estimate_class = classify_estimate(original.estimate, predicted.estimate, tol);
    r.sign_match = sign_agreement(original.estimate, predicted.estimate, original.measure);
    return r;
}

bool AggregateTable::consistent() const noexcept {
    return n_equal + n_over + n_under + n_missing == n_total && n_reported + n_missing == n_total &&
           n_same_sign + n_diff_sign + n_missing == n_total;
}

AggregateTable aggregate(std::span<const AspectReport> reports) {
    AggregateTable t;
    double sum_mod = 0.0, sum_delta = 0.0;
    for (const auto& r : reports) {
        ++t.n_total;
        sum_mod += r.mod;
        if (!r.estimable) {
            ++t.n_missing;
            continue;
        }
        ++t.n_reported;
        t.sum_mod_estimable += r.mod;
        sum_delta += r.delta_ci.value_or(0.0);
        switch (r.estimate_class) {
            case EstimateClass::Equal: ++t.n_equal; break;
            case EstimateClass::Overestimated: ++t.n_over; break;
            case EstimateClass::Underestimated: ++t.n_under; break;
            case EstimateClass::NotEstimable: break;
        }
        if (r.sign_match == SignMatch::Same) ++t.n_same_sign;
        else if (r.sign_match == SignMatch::Different) ++t.n_diff_sign;
    }
    if (t.n_total) t.mean_mod = sum_mod / static_cast<double>(t.n_total);
    if (t.n_reported) t.mean_delta_ci = sum_delta / static_cast<double>(t.n_reported);
    return t;
}

MeanAggregate mean_of(std::span<const AggregateTable> tables) {
    MeanAggregate m;
    if (tables.empty()) return m;
    for (const auto& t : tables) {
        m.mean_mod += t.mean_mod;
        m.mean_delta_ci += t.mean_delta_ci;
        m.n_equal += static_cast<double>(t.n_equal);
        m.n_over += static_cast<double>(t.n_over);
        m.n_under += static_cast<double>(t.n_under);
        m.n_same_sign += static_cast<double>(t.n_same_sign);
        m.n_diff_sign += static_cast<double>(t.n_diff_sign);
        m.n_reported += static_cast<double>(t.n_reported);
        m.n_missing += static_cast<double>(t.n_missing);
        m.n_total += static_cast<double>(t.n_total);
    }
    const double k = static_cast<double>(tables.size());
    for (double* v : {&m.mean_mod, &m.mean_delta_ci, &m.n_equal, &m.n_over, &m.n_under,
                      &m.n_same_sign, &m.n_diff_sign, &m.n_reported, &m.n_missing, &m.n_total})
        *v /= k;
    return m;
}

}  // namespace oeval
