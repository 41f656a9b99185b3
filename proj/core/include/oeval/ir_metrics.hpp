#pragma once

// Rank-based screening measures. A ranking is the ordered list of
// publication ids for one topic; relevance comes from that topic's
// judgments (grade > 0). Unjudged documents count as non-relevant.
//
// R is the number of relevant documents in the judgments, N the ranking
// length. Every measure except cutoff_at_percent() requires R >= 1.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oeval/trec.hpp"

namespace oeval {

// ceil(k * N / 100), at least 1.
std::size_t cutoff_at_percent(std::size_t n_docs, double k_percent);

double average_precision(std::span<const std::string> ranking, const TopicJudgments& judgments);
double map_over_topics(std::span<const double> average_precisions);

double recall_at_percent(std::span<const std::string> ranking, const TopicJudgments& judgments,
                         double k_percent);
double ndcg_at_percent(std::span<const std::string> ranking, const TopicJudgments& judgments,
                       double k_percent);

// (N - rank*) / N - (1 - r), rank* = first rank where recall >= r (N if the
// ranking never reaches r).
double wss_at_recall(std::span<const std::string> ranking, const TopicJudgments& judgments,
                     double recall_target);

std::optional<std::size_t> last_relevant_rank(std::span<const std::string> ranking,
                                              const TopicJudgments& judgments);

// Mean of recall@j for j = 1..N.
double aurc(std::span<const std::string> ranking, const TopicJudgments& judgments);

struct TopicEvaluation {
    std::string topic_id;
    std::size_t n_docs = 0;
    std::size_t n_relevant = 0;
    std::size_t n_unjudged = 0;
    double ap = 0.0;
    std::map<double, double> recall_at;  // percent -> recall
    std::map<double, double> ndcg_at;    // percent -> nDCG
    std::map<double, double> wss;        // recall target -> WSS
    std::optional<std::size_t> last_rel_rank;
    double aurc = 0.0;
};

struct IrMetricConfig {
    std::vector<double> recall_percents{5, 10, 20, 30, 50};
    std::vector<double> ndcg_percents{20};
    std::vector<double> wss_targets{0.95, 1.0};
};

// Returns nullopt when the topic has no relevant documents.
std::optional<TopicEvaluation> evaluate_topic(std::string topic_id,
                                              std::span<const std::string> ranking,
                                              const TopicJudgments& judgments,
                                              const IrMetricConfig& config = {});

}  // namespace oeval
