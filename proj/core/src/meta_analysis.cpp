#include "oeval/meta_analysis.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <optional>

#include "oeval/error.hpp"

namespace oeval {
namespace {

// 2x2 table after the zero-cell rule. Cells are real because of the +0.5.
struct Cells {
    double a, b, c, d;  // exp events, exp non-events, ctrl events, ctrl non-events
    double n1() const { return a + b; }
    double n2() const { return c + d; }
    double n() const { return a + b + c + d; }
};

std::optional<Cells> prepare_cells(const DichotomousArms& arms, EffectMeasure measure) {
    if (arms.total_exp <= 0 || arms.total_ctrl <= 0) return std::nullopt;
    Cells cells{static_cast<double>(arms.events_exp),
                static_cast<double>(arms.total_exp - arms.events_exp),
                static_cast<double>(arms.events_ctrl),
                static_cast<double>(arms.total_ctrl - arms.events_ctrl)};
    if (measure == EffectMeasure::RD) return cells;
    if (arms.events_exp == 0 && arms.events_ctrl == 0) return std::nullopt;
    if (cells.a == 0 || cells.b == 0 || cells.c == 0 || cells.d == 0) {
        cells.a += 0.5;
        cells.b += 0.5;
        cells.c += 0.5;
        cells.d += 0.5;
    }
    return cells;
}

StudyEffect not_estimable(std::string study_id, bool log_scale) {
    StudyEffect e;
    e.study_id = std::move(study_id);
    e.log_scale = log_scale;
    e.estimable = false;
    return e;
}

PooledOutcome empty_pool(EffectMeasure measure) {
    PooledOutcome p;
    p.measure = measure;
    p.estimable = false;
    return p;
}

double back_transform(double value, bool log_scale) { return log_scale ? std::exp(value) : value; }

void finish_pool(PooledOutcome& p, double ci_level) {
    const bool log_scale = is_ratio_measure(p.measure);
    p.estimate = back_transform(p.transformed_estimate, log_scale);
    const Interval ci = confidence_interval(p.transformed_estimate, p.se, ci_level, log_scale);
    p.ci_low = ci.low;
    p.ci_high = ci.high;
    p.estimable = std::isfinite(p.estimate) && std::isfinite(p.ci_low) && std::isfinite(p.ci_high);
}

double i_squared(double q, std::size_t k) {
    if (k < 2 || q <= 0.0) return 0.0;
    const double df = static_cast<double>(k - 1);
    return q > df ? (q - df) / q : 0.0;
}

bool usable_for_iv(const StudyEffect& e) {
    return e.estimable && e.se > 0.0 && std::isfinite(e.se) && std::isfinite(e.transformed_point);
}

}  // namespace

double z_for_level(double ci_level) {
    if (std::abs(ci_level - 0.95) < 1e-12) return kZ95;
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("CI level must lie in (0, 1)");
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 1.0 - (1.0 - ci_level) / 2.0);
}

StudyEffect study_effect_dichotomous(const DichotomousArms& arms, EffectMeasure measure,
                                     std::string study_id) {
    const bool log_scale = is_ratio_measure(measure);
    const auto cells = prepare_cells(arms, measure);
    if (!cells || !(measure == EffectMeasure::RR || measure == EffectMeasure::OR ||
                    measure == EffectMeasure::RD))
        return not_estimable(std::move(study_id), log_scale);

    const auto [a, b, c, d] = *cells;
    const double n1 = cells->n1(), n2 = cells->n2();
    StudyEffect e;
    e.study_id = std::move(study_id);
    e.log_scale = log_scale;
    switch (measure) {
        case EffectMeasure::RR:
            e.point = (a / n1) / (c / n2);
            e.se = std::sqrt(1.0 / a - 1.0 / n1 + 1.0 / c - 1.0 / n2);
            break;
        case EffectMeasure::OR:
            e.point = (a * d) / (b * c);
            e.se = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
            break;
        default:
            e.point = a / n1 - c / n2;
            e.se = std::sqrt(a * b / (n1 * n1 * n1) + c * d / (n2 * n2 * n2));
            break;
    }
    e.transformed_point = log_scale ? std::log(e.point) : e.point;
    e.estimable = std::isfinite(e.transformed_point) && std::isfinite(e.se);
    return e;
}

StudyEffect study_effect_continuous(const ContinuousArms& arms, EffectMeasure measure,
                                    std::string study_id) {
    if (arms.n_exp <= 0 || arms.n_ctrl <= 0 ||
        !(measure == EffectMeasure::MD || measure == EffectMeasure::SMD))
        return not_estimable(std::move(study_id), false);

    const double n1 = static_cast<double>(arms.n_exp);
    const double n2 = static_cast<double>(arms.n_ctrl);
    const double md = arms.mean_exp - arms.mean_ctrl;
    StudyEffect e;
    e.study_id = std::move(study_id);
    e.log_scale = false;

    if (measure == EffectMeasure::MD) {
        e.point = md;
        e.se = std::sqrt(arms.sd_exp * arms.sd_exp / n1 + arms.sd_ctrl * arms.sd_ctrl / n2);
    } else {
        const double total = n1 + n2;
        if (total < 3.0) return not_estimable(std::move(e.study_id), false);
        const double pooled_var = ((n1 - 1.0) * arms.sd_exp * arms.sd_exp +
                                   (n2 - 1.0) * arms.sd_ctrl * arms.sd_ctrl) /
                                  (total - 2.0);
        const double s = std::sqrt(pooled_var);
        double g = 0.0;
        if (s == 0.0) {
            if (md != 0.0) return not_estimable(std::move(e.study_id), false);
        } else {
            g = md / s * (1.0 - 3.0 / (4.0 * total - 9.0));
        }
        const double var = total / (n1 * n2) + g * g / (2.0 * (total - 3.94));
        if (!(var > 0.0)) return not_estimable(std::move(e.study_id), false);
        e.point = g;
        e.se = std::sqrt(var);
    }
    e.transformed_point = e.point;
    e.estimable = std::isfinite(e.point) && std::isfinite(e.se);
    return e;
}

StudyEffect study_effect(const StudyRow& row, EffectMeasure measure) {
    if (const auto* d = std::get_if<DichotomousArms>(&row.data))
        return study_effect_dichotomous(*d, measure, row.study_id);
    return study_effect_continuous(std::get<ContinuousArms>(row.data), measure, row.study_id);
}

Interval confidence_interval(double transformed_point, double se, double ci_level, bool log_scale) {
    const double half = z_for_level(ci_level) * se;
    return {back_transform(transformed_point - half, log_scale),
            back_transform(transformed_point + half, log_scale)};
}

PooledOutcome pool_mantel_haenszel(std::span<const DichotomousStratum> rows, EffectMeasure measure,
                                   double ci_level) {
    if (!(measure == EffectMeasure::RR || measure == EffectMeasure::OR ||
          measure == EffectMeasure::RD))
        throw ConfigError("Mantel-Haenszel pooling supports RR, OR and RD only");

    struct Stratum {
        const DichotomousStratum* row;
        Cells cells;
    };
    std::vector<Stratum> strata;
    for (const auto& row : rows)
        if (auto cells = prepare_cells(row.arms, measure)) strata.push_back({&row, *cells});
    if (strata.empty()) return empty_pool(measure);

    PooledOutcome p;
    p.measure = measure;
    p.n_studies = strata.size();

    std::vector<double> raw_weights;
    raw_weights.reserve(strata.size());

    if (measure == EffectMeasure::RR) {
        double sum_r = 0, sum_s = 0, sum_p = 0;
        for (const auto& s : strata) {
            const auto& [a, b, c, d] = s.cells;
            const double n1 = s.cells.n1(), n2 = s.cells.n2(), n = s.cells.n();
            const double r = a * n2 / n;
            const double sw = c * n1 / n;
            sum_r += r;
            sum_s += sw;
            sum_p += (n1 * n2 * (a + c) - a * c * n) / (n * n);
            raw_weights.push_back(sw);
        }
        p.transformed_estimate = std::log(sum_r / sum_s);
        p.se = std::sqrt(sum_p / (sum_r * sum_s));
    } else if (measure == EffectMeasure::OR) {
        double sum_r = 0, sum_s = 0, sum_pr = 0, sum_ps_qr = 0, sum_qs = 0;
        for (const auto& s : strata) {
            const auto& [a, b, c, d] = s.cells;
            const double n = s.cells.n();
            const double r = a * d / n;
            const double sw = b * c / n;
            const double pp = (a + d) / n;
            const double qq = (b + c) / n;
            sum_r += r;
            sum_s += sw;
            sum_pr += pp * r;
            sum_ps_qr += pp * sw + qq * r;
            sum_qs += qq * sw;
            raw_weights.push_back(sw);
        }
        p.transformed_estimate = std::log(sum_r / sum_s);
        p.se = std::sqrt(sum_pr / (2.0 * sum_r * sum_r) + sum_ps_qr / (2.0 * sum_r * sum_s) +
                         sum_qs / (2.0 * sum_s * sum_s));
    } else {
        double sum_w = 0, sum_wrd = 0, sum_var = 0;
        for (const auto& s : strata) {
            const auto& [a, b, c, d] = s.cells;
            const double n1 = s.cells.n1(), n2 = s.cells.n2(), n = s.cells.n();
            const double w = n1 * n2 / n;
            sum_w += w;
            sum_wrd += w * (a / n1 - c / n2);
            sum_var += (a * b * n2 * n2 * n2 + c * d * n1 * n1 * n1) / (n1 * n2 * n * n);
            raw_weights.push_back(w);
        }
        p.transformed_estimate = sum_wrd / sum_w;
        p.se = std::sqrt(sum_var) / sum_w;
    }

    double total_weight = 0;
    for (double w : raw_weights) total_weight += w;
    p.weights.reserve(strata.size());
    for (std::size_t i = 0; i < strata.size(); ++i)
        p.weights.push_back({strata[i].row->study_id, raw_weights[i] / total_weight});

    // Heterogeneity around the MH estimate with inverse-variance weights.
    std::size_t k = 0;
    for (const auto& s : strata) {
        const StudyEffect e = study_effect_dichotomous(s.row->arms, measure);
        if (!usable_for_iv(e)) continue;
        const double dev = e.transformed_point - p.transformed_estimate;
        p.q += dev * dev / (e.se * e.se);
        ++k;
    }
    p.i2 = i_squared(p.q, k);
    p.tau2 = 0.0;

    finish_pool(p, ci_level);
    return p;
}

PooledOutcome pool_inverse_variance(std::span<const StudyEffect> effects, EffectMeasure measure,
                                    Model model, double ci_level) {
    std::vector<const StudyEffect*> used;
    for (const auto& e : effects)
        if (usable_for_iv(e)) used.push_back(&e);
    if (used.empty()) return empty_pool(measure);

    const auto weighted_mean = [&](double tau2, double& sum_w) {
        double sum_wt = 0;
        sum_w = 0;
        for (const auto* e : used) {
            const double w = 1.0 / (e->se * e->se + tau2);
            sum_w += w;
            sum_wt += w * e->transformed_point;
        }
        return sum_wt / sum_w;
    };

    PooledOutcome p;
    p.measure = measure;
    p.n_studies = used.size();

    double sum_w = 0;
    const double fixed_mean = weighted_mean(0.0, sum_w);
    double sum_w2 = 0;
    for (const auto* e : used) {
        const double w = 1.0 / (e->se * e->se);
        const double dev = e->transformed_point - fixed_mean;
        p.q += w * dev * dev;
        sum_w2 += w * w;
    }
    const std::size_t k = used.size();
    p.i2 = i_squared(p.q, k);

    if (model == Model::Random && k > 1) {
        const double c = sum_w - sum_w2 / sum_w;
        if (c > 0.0) p.tau2 = std::max(0.0, (p.q - static_cast<double>(k - 1)) / c);
    }

    double sum_w_star = 0;
    p.transformed_estimate = weighted_mean(p.tau2, sum_w_star);
    p.se = 1.0 / std::sqrt(sum_w_star);
    p.weights.reserve(k);
    for (const auto* e : used)
        p.weights.push_back({e->study_id, (1.0 / (e->se * e->se + p.tau2)) / sum_w_star});

    finish_pool(p, ci_level);
    return p;
}

std::vector<StudyEffect> study_effects(const Outcome& outcome) {
    std::vector<StudyEffect> out;
    out.reserve(outcome.row_count());
    for (const auto& sg : outcome.subgroups)
        for (const auto& row : sg.rows) out.push_back(study_effect(row, outcome.effect_measure));
    return out;
}

namespace {

template <typename Keep>
PooledOutcome pool_rows(const Outcome& outcome, Keep keep) {
    if (outcome.pooling == Pooling::MantelHaenszel && outcome.model == Model::Fixed &&
        outcome.data_kind == DataKind::Dichotomous) {
        std::vector<DichotomousStratum> strata;
        for (const auto& sg : outcome.subgroups)
            for (const auto& row : sg.rows)
                if (keep(row))
                    strata.push_back({row.study_id, std::get<DichotomousArms>(row.data)});
        return pool_mantel_haenszel(strata, outcome.effect_measure, outcome.ci_level);
    }
    std::vector<StudyEffect> effects;
    for (const auto& sg : outcome.subgroups)
        for (const auto& row : sg.rows)
            if (keep(row)) effects.push_back(study_effect(row, outcome.effect_measure));
    return pool_inverse_variance(effects, outcome.effect_measure, outcome.model, outcome.ci_level);
}

}  // namespace

PooledOutcome pool_outcome(const Outcome& outcome, const std::set<std::string>& included_studies) {
    return pool_rows(outcome,
                     [&](const StudyRow& row) { return included_studies.contains(row.study_id); });
}

PooledOutcome pool_outcome(const Outcome& outcome) {
    return pool_rows(outcome, [](const StudyRow&) { return true; });
}

}  // namespace oeval
