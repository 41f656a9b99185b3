#pragma once

#include <span>
#include <string>
#include <vector>

#include "oeval/aspects.hpp"
#include "oeval/evaluation_corpus.hpp"
#include "oeval/ir_metrics.hpp"
#include "oeval/mapping.hpp"
#include "oeval/trec.hpp"

namespace oeval {

struct OutcomeResult {
    const GoldOutcome* gold = nullptr;  // points into the EvaluationCorpus
    AspectReport report;
    std::optional<double> predicted;    // natural-scale estimate when estimable
};

struct CutoffEvaluation {
    double cutoff = 0.0;  // percent of the topic's ranking
    std::vector<OutcomeResult> outcomes;
    AggregateTable aggregate;
};

struct RunEvaluation {
    std::string run_tag;
    bool baseline = false;
    std::vector<CutoffEvaluation> cutoffs;
    std::vector<TopicEvaluation> topics;
    double map = 0.0;
    std::vector<std::string> warnings;

    const CutoffEvaluation* at_cutoff(double cutoff) const;
};

struct RunEvalConfig {
    std::vector<double> cutoffs{5, 10, 20, 30, 50};
    IrMetricConfig ir;
    ToleranceConfig tolerance;
};

void validate(const RunEvalConfig& config);

// The evaluation universe is the outcomes of corpus reviews whose id is a
// topic of the run. Run topics without a review, and reviews without a run
// topic, produce warnings.
RunEvaluation evaluate_run(const RunRanking& run, const EvaluationCorpus& corpus, const Qrels& qrels,
                           const StudyPublicationMap& map, const RunEvalConfig& config = {});

// All publications of the review's studies first (ascending id), then the
// other judged documents of the topic from `collection` (ascending id).
RunRanking gold_baseline(std::span<const Review> reviews, const StudyPublicationMap& map,
                         const Qrels* collection = nullptr);

// Qrels-relevant publications first, then the remaining judged documents,
// each block in ascending id. Only topics that are corpus reviews.
RunRanking max_with_qrels_baseline(const Qrels& qrels, std::span<const Review> reviews);

}  // namespace oeval
