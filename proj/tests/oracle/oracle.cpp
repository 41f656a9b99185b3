#include "oracle.hpp"

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {
namespace {

namespace mp = boost::multiprecision;
using Q = mp::cpp_rational;
using D = mp::cpp_dec_float_50;

const D kZ("1.959964");

struct Table {
    Q a, b, c, d;
};

bool is_ratio(oeval::EffectMeasure m) {
    return m == oeval::EffectMeasure::RR || m == oeval::EffectMeasure::OR;
}

// The 2x2 table a pool sees, or nothing when the row cannot contribute.
std::optional<Table> table_for(const oeval::DichotomousArms& x, oeval::EffectMeasure m) {
    if (x.total_exp == 0 || x.total_ctrl == 0) return std::nullopt;
    Table t{Q(x.events_exp), Q(x.total_exp - x.events_exp), Q(x.events_ctrl), Q(x.total_ctrl - x.events_ctrl)};
    if (!is_ratio(m)) return t;
    if (x.events_exp == 0 && x.events_ctrl == 0) return std::nullopt;
    const bool zero = x.events_exp == 0 || x.events_ctrl == 0 || x.events_exp == x.total_exp ||
                      x.events_ctrl == x.total_ctrl;
    if (zero) {
        const Q half(1, 2);
        t.a += half;
        t.b += half;
        t.c += half;
        t.d += half;
    }
    return t;
}

D to_d(const Q& q) { return D(mp::numerator(q)) / D(mp::denominator(q)); }

struct Effect {
    D theta;
    D var;
};

std::optional<Effect> dich_effect(const oeval::DichotomousArms& x, oeval::EffectMeasure m) {
    const auto t = table_for(x, m);
    if (!t) return std::nullopt;
    const D a = to_d(t->a), b = to_d(t->b), c = to_d(t->c), d = to_d(t->d);
    const D n1 = a + b, n2 = c + d;
    Effect e;
    switch (m) {
        case oeval::EffectMeasure::RR:
            e.theta = mp::log((a / n1) / (c / n2));
            e.var = 1 / a - 1 / n1 + 1 / c - 1 / n2;
            break;
        case oeval::EffectMeasure::OR:
            e.theta = mp::log(a * d / (b * c));
            e.var = 1 / a + 1 / b + 1 / c + 1 / d;
            break;
        default:
            e.theta = a / n1 - c / n2;
            e.var = a * b / (n1 * n1 * n1) + c * d / (n2 * n2 * n2);
    }
    return e;
}

std::optional<Effect> cont_effect(const oeval::ContinuousArms& x, oeval::EffectMeasure m) {
    if (x.n_exp == 0 || x.n_ctrl == 0) return std::nullopt;
    const D n1(x.n_exp), n2(x.n_ctrl);
    const D m1(x.mean_exp), m2(x.mean_ctrl), s1(x.sd_exp), s2(x.sd_ctrl);
    if (m == oeval::EffectMeasure::MD) return Effect{m1 - m2, s1 * s1 / n1 + s2 * s2 / n2};
    const D big_n = n1 + n2;
    if (big_n < 3) return std::nullopt;
    const D sp = mp::sqrt(((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / (big_n - 2));
    D g = 0;
    if (sp == 0) {
        if (m1 != m2) return std::nullopt;
    } else {
        g = (m1 - m2) / sp * (1 - D(3) / (4 * big_n - 9));
    }
    return Effect{g, big_n / (n1 * n2) + g * g / (2 * (big_n - D("3.94")))};
}

Pooled finish(oeval::EffectMeasure m, const D& theta, const D& se) {
    Pooled p;
    p.estimable = true;
    D lo = theta - kZ * se, hi = theta + kZ * se, est = theta;
    if (is_ratio(m)) {
        est = mp::exp(est);
        lo = mp::exp(lo);
        hi = mp::exp(hi);
    }
    p.estimate = static_cast<double>(est);
    p.ci_low = static_cast<double>(lo);
    p.ci_high = static_cast<double>(hi);
    return p;
}

Pooled mantel_haenszel(const std::vector<oeval::DichotomousArms>& rows, oeval::EffectMeasure m) {
    std::vector<Table> ts;
    for (const auto& r : rows)
        if (auto t = table_for(r, m)) ts.push_back(*t);
    if (ts.empty()) return {};

    if (m == oeval::EffectMeasure::RD) {
        Q sw = 0, swd = 0, var_num = 0;
        for (const auto& t : ts) {
            const Q n1 = t.a + t.b, n2 = t.c + t.d, n = n1 + n2;
            sw += n1 * n2 / n;
            swd += (t.a * n2 - t.c * n1) / n;  // w * (a/n1 - c/n2)
            var_num += (t.a * t.b * n2 * n2 * n2 + t.c * t.d * n1 * n1 * n1) / (n1 * n2 * n * n);
        }
        return finish(m, to_d(swd / sw), mp::sqrt(to_d(var_num)) / to_d(sw));
    }

    Q r_sum = 0, s_sum = 0, p_sum = 0, pr = 0, ps = 0, qr = 0, qs = 0;
    for (const auto& t : ts) {
        const Q n1 = t.a + t.b, n2 = t.c + t.d, n = n1 + n2;
        if (m == oeval::EffectMeasure::RR) {
            r_sum += t.a * n2 / n;
            s_sum += t.c * n1 / n;
            p_sum += (n1 * n2 * (t.a + t.c) - t.a * t.c * n) / (n * n);
        } else {
            const Q r = t.a * t.d / n, s = t.b * t.c / n;
            const Q p = (t.a + t.d) / n, q = (t.b + t.c) / n;
            r_sum += r;
            s_sum += s;
            pr += p * r;
            ps += p * s;
            qr += q * r;
            qs += q * s;
        }
    }
    if (r_sum == 0 || s_sum == 0) return {};
    const D theta = mp::log(to_d(r_sum / s_sum));
    D var;
    if (m == oeval::EffectMeasure::RR) {
        var = to_d(p_sum / (r_sum * s_sum));
    } else {
        var = to_d(pr / (2 * r_sum * r_sum) + (ps + qr) / (2 * r_sum * s_sum) + qs / (2 * s_sum * s_sum));
    }
    return finish(m, theta, mp::sqrt(var));
}

Pooled inverse_variance(const std::vector<Effect>& all, oeval::EffectMeasure m, bool random) {
    std::vector<Effect> es;
    for (const auto& e : all)
        if (e.var > 0) es.push_back(e);
    if (es.empty()) return {};

    D sw = 0, swt = 0, sw2 = 0;
    for (const auto& e : es) {
        sw += 1 / e.var;
        swt += e.theta / e.var;
        sw2 += 1 / (e.var * e.var);
    }
    const D fixed = swt / sw;
    D q = 0;
    for (const auto& e : es) q += (e.theta - fixed) * (e.theta - fixed) / e.var;

    D tau2 = 0;
    const auto k = static_cast<long>(es.size());
    if (random && k > 1) {
        tau2 = (q - (k - 1)) / (sw - sw2 / sw);
        if (tau2 < 0) tau2 = 0;
    }
    D rw = 0, rwt = 0;
    for (const auto& e : es) {
        rw += 1 / (e.var + tau2);
        rwt += e.theta / (e.var + tau2);
    }
    Pooled p = finish(m, rwt / rw, 1 / mp::sqrt(rw));
    p.tau2 = static_cast<double>(tau2);
    p.q = static_cast<double>(q);
    return p;
}

}  // namespace

Pooled pool(const oeval::Outcome& outcome, const std::set<std::string>* included) {
    std::vector<const oeval::StudyRow*> rows;
    for (const auto& sg : outcome.subgroups)
        for (const auto& r : sg.rows)
            if (!included || included->count(r.study_id)) rows.push_back(&r);

    const auto m = outcome.effect_measure;
    if (outcome.data_kind == oeval::DataKind::Dichotomous && outcome.pooling == oeval::Pooling::MantelHaenszel &&
        outcome.model == oeval::Model::Fixed) {
        std::vector<oeval::DichotomousArms> arms;
        for (const auto* r : rows) arms.push_back(std::get<oeval::DichotomousArms>(r->data));
        return mantel_haenszel(arms, m);
    }
    std::vector<Effect> effects;
    for (const auto* r : rows) {
        std::optional<Effect> e;
        if (const auto* d = std::get_if<oeval::DichotomousArms>(&r->data))
            e = dich_effect(*d, m);
        else
            e = cont_effect(std::get<oeval::ContinuousArms>(r->data), m);
        if (e) effects.push_back(*e);
    }
    return inverse_variance(effects, m, outcome.model == oeval::Model::Random);
}

}  // namespace oracle
