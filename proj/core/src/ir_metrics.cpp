#include "oeval/ir_metrics.hpp"

#include <cmath>

#include "oeval/error.hpp"

namespace oeval {
namespace {

bool relevant(const TopicJudgments& judgments, const std::string& pub) {
    auto it = judgments.find(pub);
    return it != judgments.end() && it->second > 0;
}

std::size_t count_relevant(const TopicJudgments& judgments) {
    std::size_t r = 0;
    for (const auto& [_, grade] : judgments) r += grade > 0;
    return r;
}

std::size_t require_relevant(const TopicJudgments& judgments, const char* measure) {
    const std::size_t r = count_relevant(judgments);
    if (r == 0) throw Error(std::string(measure) + ": topic has no relevant documents");
    return r;
}

}  // namespace

std::size_t cutoff_at_percent(std::size_t n_docs, double k_percent) {
    if (!(k_percent > 0.0 && k_percent <= 100.0)) throw ConfigError("cutoff percent must lie in (0, 100]");
    // Integer ceil for integral k keeps 30% of 100 at exactly 30.
    const double scaled = k_percent * static_cast<double>(n_docs);
    std::size_t cut;
    if (k_percent == std::floor(k_percent)) {
        const auto num = static_cast<std::size_t>(k_percent) * n_docs;
        cut = (num + 99) / 100;
    } else {
        cut = static_cast<std::size_t>(std::ceil(scaled / 100.0));
    }
    return std::max<std::size_t>(cut, 1);
}

double average_precision(std::span<const std::string> ranking, const TopicJudgments& judgments) {
    const std::size_t r = require_relevant(judgments, "average_precision");
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (!relevant(judgments, ranking[i])) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(r);
}

double map_over_topics(std::span<const double> average_precisions) {
    if (average_precisions.empty()) return 0.0;
    double sum = 0.0;
    for (double ap : average_precisions) sum += ap;
    return sum / static_cast<double>(average_precisions.size());
}

double recall_at_percent(std::span<const std::string> ranking, const TopicJudgments& judgments,
                         double k_percent) {
    const std::size_t r = require_relevant(judgments, "recall_at_percent");
    const std::size_t cut = std::min(cutoff_at_percent(ranking.size(), k_percent), ranking.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cut; ++i) hits += relevant(judgments, ranking[i]);
    return static_cast<double>(hits) / static_cast<double>(r);
}

double ndcg_at_percent(std::span<const std::string> ranking, const TopicJudgments& judgments,
                       double k_percent) {
    const std::size_t r = require_relevant(judgments, "ndcg_at_percent");
    const std::size_t cut = cutoff_at_percent(ranking.size(), k_percent);
    double dcg = 0.0, ideal = 0.0;
    for (std::size_t i = 0; i < std::min(cut, ranking.size()); ++i)
        if (relevant(judgments, ranking[i])) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
    for (std::size_t i = 0; i < std::min(cut, r); ++i)
        ideal += 1.0 / std::log2(static_cast<double>(i + 2));
    return dcg / ideal;
}

double wss_at_recall(std::span<const std::string> ranking, const TopicJudgments& judgments,
                     double recall_target) {
    const std::size_t r = require_relevant(judgments, "wss_at_recall");
    const std::size_t n = ranking.size();
    if (n == 0) return -(1.0 - recall_target);
    // Smallest hit count reaching the target, compared in integers where possible.
    const double needed = recall_target * static_cast<double>(r);
    std::size_t rank_star = n;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += relevant(judgments, ranking[i]);
        if (static_cast<double>(hits) >= needed - 1e-12 * static_cast<double>(r)) {
            rank_star = i + 1;
            break;
        }
    }
    return static_cast<double>(n - rank_star) / static_cast<double>(n) - (1.0 - recall_target);
}

std::optional<std::size_t> last_relevant_rank(std::span<const std::string> ranking,
                                              const TopicJudgments& judgments) {
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (relevant(judgments, ranking[i])) last = i + 1;
    return last;
}

double aurc(std::span<const std::string> ranking, const TopicJudgments& judgments) {
    const std::size_t r = require_relevant(judgments, "aurc");
    if (ranking.empty()) return 0.0;
    std::size_t hits = 0;
    double area = 0.0;
    for (const auto& pub : ranking) {
        hits += relevant(judgments, pub);
        area += static_cast<double>(hits) / static_cast<double>(r);
    }
    return area / static_cast<double>(ranking.size());
}

std::optional<TopicEvaluation> evaluate_topic(std::string topic_id,
                                              std::span<const std::string> ranking,
                                              const TopicJudgments& judgments,
                                              const IrMetricConfig& config) {
    TopicEvaluation t;
    t.topic_id = std::move(topic_id);
    t.n_docs = ranking.size();
    t.n_relevant = count_relevant(judgments);
    if (t.n_relevant == 0) return std::nullopt;
    for (const auto& pub : ranking) t.n_unjudged += !judgments.contains(pub);
    t.ap = average_precision(ranking, judgments);
    if (!ranking.empty()) {
        for (double k : config.recall_percents) t.recall_at[k] = recall_at_percent(ranking, judgments, k);
        for (double k : config.ndcg_percents) t.ndcg_at[k] = ndcg_at_percent(ranking, judgments, k);
    }
    for (double target : config.wss_targets) t.wss[target] = wss_at_recall(ranking, judgments, target);
    t.last_rel_rank = last_relevant_rank(ranking, judgments);
    t.aurc = aurc(ranking, judgments);
    return t;
}

}  // namespace oeval
