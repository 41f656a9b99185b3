#include "oeval/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "oeval/error.hpp"
#include "oeval/run_evaluation.hpp"

namespace oeval {
namespace {

void require_pairs(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("correlation: series differ in length");
}

double mean(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y);
    if (x.size() < 2) return 0.0;
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y);
    const auto rx = average_ranks(x), ry = average_ranks(y);
    return pearson(rx, ry);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y);
    LinearFit fit;
    if (x.empty()) return fit;
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

std::vector<MeasureCorrelation> correlate_measures(std::span<const RunEvaluation> evaluations,
                                                   double cutoff) {
    using Extract = std::function<std::optional<double>(const TopicEvaluation&)>;
    std::vector<std::pair<std::string, Extract>> measures;
    measures.emplace_back("map", [](const TopicEvaluation& t) { return t.ap; });
    measures.emplace_back("last_rel", [](const TopicEvaluation& t) -> std::optional<double> {
        if (!t.last_rel_rank) return std::nullopt;
        return static_cast<double>(*t.last_rel_rank);
    });
    measures.emplace_back("aurc", [](const TopicEvaluation& t) { return t.aurc; });

    // Per-cutoff measures present in the first run that has topics.
    const TopicEvaluation* probe = nullptr;
    for (const auto& ev : evaluations)
        if (!ev.baseline && !ev.topics.empty()) {
            probe = &ev.topics.front();
            break;
        }
    if (probe) {
        for (const auto& [k, _] : probe->recall_at)
            measures.emplace_back("recall@" + std::to_string(static_cast<int>(k)) + "%",
                                  [k](const TopicEvaluation& t) -> std::optional<double> {
                                      auto it = t.recall_at.find(k);
                                      if (it == t.recall_at.end()) return std::nullopt;
                                      return it->second;
                                  });
        for (const auto& [target, _] : probe->wss)
            measures.emplace_back("wss@" + std::to_string(static_cast<int>(std::lround(target * 100))) + "%",
                                  [target](const TopicEvaluation& t) -> std::optional<double> {
                                      auto it = t.wss.find(target);
                                      if (it == t.wss.end()) return std::nullopt;
                                      return it->second;
                                  });
        for (const auto& [k, _] : probe->ndcg_at)
            measures.emplace_back("ndcg@" + std::to_string(static_cast<int>(k)) + "%",
                                  [k](const TopicEvaluation& t) -> std::optional<double> {
                                      auto it = t.ndcg_at.find(k);
                                      if (it == t.ndcg_at.end()) return std::nullopt;
                                      return it->second;
                                  });
    }

    std::vector<MeasureCorrelation> out;
    for (const auto& [name, extract] : measures) {
        MeasureCorrelation mc;
        mc.measure = name;
        for (const auto& ev : evaluations) {
            if (ev.baseline) continue;
            const CutoffEvaluation* at = ev.at_cutoff(cutoff);
            if (!at) throw ConfigError("run " + ev.run_tag + " was not evaluated at the correlation cutoff");
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& t : ev.topics)
                if (auto v = extract(t)) {
                    sum += *v;
                    ++n;
                }
            if (n == 0) continue;
            mc.run_tags.push_back(ev.run_tag);
            mc.measure_values.push_back(sum / static_cast<double>(n));
            mc.mean_mod.push_back(at->aggregate.mean_mod);
        }
        mc.pearson = pearson(mc.measure_values, mc.mean_mod);
        mc.spearman = spearman(mc.measure_values, mc.mean_mod);
        mc.fit = least_squares(mc.measure_values, mc.mean_mod);
        out.push_back(std::move(mc));
    }
    return out;
}

}  // namespace oeval
