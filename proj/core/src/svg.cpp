#include "oeval/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace oeval {
namespace {

std::string escape_xml(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Fixed two-decimal coordinates keep output byte-stable.
std::string c2(double v) { return fmt::format("{:.2f}", v); }

std::string header(double width, double height) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        c2(width), c2(height));
}

std::string text(double x, double y, std::string_view s, std::string_view anchor = "start") {
    return fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"{}\">{}</text>\n", c2(x), c2(y), anchor,
                       escape_xml(s));
}

std::string line(double x1, double y1, double x2, double y2, std::string_view extra = "") {
    return fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"{}/>\n", c2(x1), c2(y1),
                       c2(x2), c2(y2), extra);
}

std::string arm_text(const StudyRow& row) {
    if (const auto* d = std::get_if<DichotomousArms>(&row.data))
        return fmt::format("{}/{}  {}/{}", d->events_exp, d->total_exp, d->events_ctrl, d->total_ctrl);
    const auto& c = std::get<ContinuousArms>(row.data);
    return fmt::format("{:.2f} ({:.2f}) n={}  {:.2f} ({:.2f}) n={}", c.mean_exp, c.sd_exp, c.n_exp,
                       c.mean_ctrl, c.sd_ctrl, c.n_ctrl);
}

struct Quartiles {
    double min, q1, median, q3, max, mean;
};

double quantile_sorted(const std::vector<double>& v, double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Quartiles quartiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    return {v.front(),
            quantile_sorted(v, 0.25),
            quantile_sorted(v, 0.5),
            quantile_sorted(v, 0.75),
            v.back(),
            sum / static_cast<double>(v.size())};
}

}  // namespace

std::string render_forest_svg(const Outcome& outcome, const PooledOutcome& pooled,
                              const std::set<std::string>* included) {
    struct Row {
        const StudyRow* row;
        StudyEffect effect;
        std::optional<double> weight;
    };
    std::vector<Row> rows;
    std::vector<bool> weight_used(pooled.weights.size(), false);
    for (const auto& sg : outcome.subgroups)
        for (const auto& r : sg.rows) {
            if (included && !included->contains(r.study_id)) continue;
            Row row{&r, study_effect(r, outcome.effect_measure), std::nullopt};
            for (std::size_t w = 0; w < pooled.weights.size(); ++w)
                if (!weight_used[w] && pooled.weights[w].study_id == r.study_id) {
                    weight_used[w] = true;
                    row.weight = pooled.weights[w].weight;
                    break;
                }
            rows.push_back(std::move(row));
        }

    const bool log_scale = is_ratio_measure(outcome.effect_measure);
    const double z = z_for_level(outcome.ci_level);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto widen = [&](double t) {
        if (std::isfinite(t)) {
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    };
    for (const auto& r : rows)
        if (r.effect.estimable) {
            widen(r.effect.transformed_point - z * r.effect.se);
            widen(r.effect.transformed_point + z * r.effect.se);
        }
    if (pooled.estimable) {
        widen(log_scale ? std::log(pooled.ci_low) : pooled.ci_low);
        widen(log_scale ? std::log(pooled.ci_high) : pooled.ci_high);
    }
    widen(0.0);  // null line on the transformed scale
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }

    const double row_h = 22.0, top = 40.0, plot_x = 560.0, plot_w = 300.0;
    const double width = plot_x + plot_w + 30.0;
    const double height = top + row_h * static_cast<double>(rows.size() + 2) + 20.0;
    auto px = [&](double t) { return plot_x + (std::clamp(t, lo, hi) - lo) / (hi - lo) * plot_w; };

    std::string svg = header(width, height);
    svg += text(10, 20, outcome.name.empty() ? outcome.outcome_id : outcome.name);
    svg += text(10, top - 6, "Study");
    svg += text(150, top - 6, "Experimental  Control");
    svg += text(380, top - 6, "Weight", "end");
    svg += text(540, top - 6, std::string(to_string(outcome.effect_measure)), "end");

    double y = top + row_h;
    for (const auto& r : rows) {
        svg += "<g class=\"study-row\">\n";
        svg += text(10, y, r.row->study_id);
        svg += text(150, y, arm_text(*r.row));
        svg += text(380, y, r.weight ? fmt::format("{:.1f}%", 100.0 * *r.weight) : "", "end");
        if (r.effect.estimable) {
            const double t = r.effect.transformed_point;
            const double ci_lo = t - z * r.effect.se, ci_hi = t + z * r.effect.se;
            const double back_lo = log_scale ? std::exp(ci_lo) : ci_lo;
            const double back_hi = log_scale ? std::exp(ci_hi) : ci_hi;
            svg += text(540, y, fmt::format("{:.2f} [{:.2f}, {:.2f}]", r.effect.point, back_lo, back_hi), "end");
            svg += line(px(ci_lo), y - 4, px(ci_hi), y - 4);
            const double size = 4.0 + 8.0 * r.weight.value_or(0.0);
            svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"black\"/>\n",
                               c2(px(t) - size / 2), c2(y - 4 - size / 2), c2(size), c2(size));
        } else {
            svg += text(540, y, "Not estimable", "end");
        }
        svg += "</g>\n";
        y += row_h;
    }

    svg += "<g class=\"total-row\">\n";
    svg += text(10, y, "Total");
    if (pooled.estimable) {
        svg += text(540, y,
                    fmt::format("{:.2f} [{:.2f}, {:.2f}]", pooled.estimate, pooled.ci_low, pooled.ci_high),
                    "end");
        const double t = log_scale ? std::log(pooled.estimate) : pooled.estimate;
        const double tl = log_scale ? std::log(pooled.ci_low) : pooled.ci_low;
        const double th = log_scale ? std::log(pooled.ci_high) : pooled.ci_high;
        svg += fmt::format("<polygon points=\"{},{} {},{} {},{} {},{}\" fill=\"black\"/>\n", c2(px(tl)),
                           c2(y - 4), c2(px(t)), c2(y - 10), c2(px(th)), c2(y - 4), c2(px(t)), c2(y + 2));
    } else {
        svg += text(540, y, "Not estimable", "end");
    }
    svg += "</g>\n";
    svg += line(px(0.0), top, px(0.0), y + 8, " stroke-dasharray=\"3,3\"");
    svg += "</svg>\n";
    return svg;
}

std::string render_box_plot_svg(const std::string& title, std::span<const BoxSeries> series,
                                 std::optional<double> axis_clamp) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& s : series)
        for (double v : s.values) {
            const double c = axis_clamp ? std::min(v, *axis_clamp) : v;
            lo = any ? std::min(lo, c) : c;
            hi = any ? std::max(hi, c) : c;
            any = true;
        }
    if (!(hi > lo)) hi = lo + 1.0;

    const double row_h = 30.0, top = 40.0, plot_x = 160.0, plot_w = 400.0;
    const double height = top + row_h * static_cast<double>(series.size()) + 40.0;
    auto px = [&](double v) {
        if (axis_clamp) v = std::min(v, *axis_clamp);
        return plot_x + (v - lo) / (hi - lo) * plot_w;
    };

    std::string svg = header(plot_x + plot_w + 30.0, height);
    svg += text(10, 20, title);
    double y = top + row_h / 2;
    for (const auto& s : series) {
        svg += text(10, y + 4, s.label);
        if (!s.values.empty()) {
            const Quartiles q = quartiles(s.values);
            svg += line(px(q.min), y, px(q.q1), y);
            svg += line(px(q.q3), y, px(q.max), y);
            svg += line(px(q.min), y - 6, px(q.min), y + 6);
            svg += line(px(q.max), y - 6, px(q.max), y + 6);
            svg += fmt::format(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                c2(px(q.q1)), c2(y - 10), c2(px(q.q3) - px(q.q1)), c2(20.0));
            svg += line(px(q.median), y - 10, px(q.median), y + 10);
            svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>\n", c2(px(q.mean)), c2(y));
        }
        y += row_h;
    }
    const double axis_y = y - row_h / 2 + 16;
    svg += line(plot_x, axis_y, plot_x + plot_w, axis_y);
    svg += text(plot_x, axis_y + 14, fmt::format("{:.2f}", lo), "middle");
    svg += text(plot_x + plot_w, axis_y + 14, fmt::format("{:.2f}", hi), "middle");
    svg += "</svg>\n";
    return svg;
}

std::string render_pareto_svg(std::span<const ParetoPoint> points) {
    const double left = 60.0, top = 30.0, w = 400.0, h = 300.0;
    std::size_t max_x = 1;
    for (const auto& p : points) max_x = std::max(max_x, p.x);
    auto px = [&](std::size_t x) { return left + static_cast<double>(x) / static_cast<double>(max_x) * w; };
    auto py = [&](double y) { return top + h - y * h; };

    std::string svg = header(left + w + 140.0, top + h + 50.0);
    svg += line(left, top + h, left + w, top + h);
    svg += line(left, top, left, top + h);
    svg += text(left + w / 2, top + h + 35, "non-estimable outcomes", "middle");
    svg += text(10, top - 10, "normalised relative difference");

    std::vector<ParetoPoint> front = frontier_of(points);
    if (front.size() > 1) {
        std::string pts;
        for (const auto& p : front) pts += fmt::format("{}{},{}", pts.empty() ? "" : " ", c2(px(p.x)), c2(py(p.y)));
        svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"black\"/>\n", pts);
    }
    for (const auto& p : points) {
        svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{}\" stroke=\"black\" class=\"{}\"/>\n",
                           c2(px(p.x)), c2(py(p.y)), p.dominated ? "none" : "black",
                           p.dominated ? "dominated" : "frontier");
        svg += text(px(p.x) + 8, py(p.y) - 6, p.run_tag);
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace oeval
