#include "oeval/run_evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "oeval/error.hpp"

namespace oeval {

const CutoffEvaluation* RunEvaluation::at_cutoff(double cutoff) const {
    for (const auto& c : cutoffs)
        if (c.cutoff == cutoff) return &c;
    return nullptr;
}

void validate(const RunEvalConfig& config) {
    if (config.cutoffs.empty()) throw ConfigError("at least one cutoff is required");
    for (double k : config.cutoffs)
        if (!(k > 0.0 && k <= 100.0)) throw ConfigError("cutoffs must lie in (0, 100]");
}

RunEvaluation evaluate_run(const RunRanking& run, const EvaluationCorpus& corpus, const Qrels& qrels,
                           const StudyPublicationMap& map, const RunEvalConfig& config) {
    validate(config);
    RunEvaluation ev;
    ev.run_tag = run.tag;

    struct TopicPlan {
        std::size_t review_index;
        const std::string* topic_id;
        const std::vector<RankedDoc>* docs;
    };
    std::vector<TopicPlan> plans;
    for (const auto& [topic, docs] : run.topics) {
        const auto idx = corpus.find_review(topic);
        if (!idx) {
            ev.warnings.push_back("topic " + topic + ": not a corpus review; skipped");
            continue;
        }
        plans.push_back({*idx, &topic, &docs});
    }
    std::sort(plans.begin(), plans.end(),
              [](const TopicPlan& a, const TopicPlan& b) { return a.review_index < b.review_index; });
    for (std::size_t r = 0; r < corpus.reviews().size(); ++r) {
        const bool covered = std::any_of(plans.begin(), plans.end(),
                                         [r](const TopicPlan& p) { return p.review_index == r; });
        if (!covered)
            ev.warnings.push_back("review " + corpus.reviews()[r].review_id +
                                  ": no ranking in run; outcomes not evaluated");
    }

    for (double k : config.cutoffs) {
        CutoffEvaluation ce;
        ce.cutoff = k;
        std::vector<AspectReport> reports;
        for (const auto& plan : plans) {
            const auto& docs = *plan.docs;
            const std::size_t cut =
                docs.empty() ? 0 : std::min(cutoff_at_percent(docs.size(), k), docs.size());
            std::set<std::string> retrieved;
            for (std::size_t i = 0; i < cut; ++i) retrieved.insert(docs[i].publication_id);
            const auto found = studies_found(*plan.topic_id, retrieved, map);
            for (const auto& gold : corpus.outcomes_of(plan.review_index)) {
                const PooledOutcome predicted = pool_outcome(corpus.outcome(gold), found);
                OutcomeResult res;
                res.gold = &gold;
                res.report = aspect_report(gold.pooled, predicted, config.tolerance);
                if (predicted.estimable) res.predicted = predicted.estimate;
                reports.push_back(res.report);
                ce.outcomes.push_back(std::move(res));
            }
        }
        ce.aggregate = aggregate(reports);
        ev.cutoffs.push_back(std::move(ce));
    }

    std::vector<double> aps;
    for (const auto& plan : plans) {
        const TopicJudgments* judged = qrels.topic(*plan.topic_id);
        if (!judged) {
            ev.warnings.push_back("topic " + *plan.topic_id + ": no qrels; IR measures skipped");
            continue;
        }
        std::vector<std::string> ranking;
        ranking.reserve(plan.docs->size());
        for (const auto& d : *plan.docs) ranking.push_back(d.publication_id);
        auto topic_eval = evaluate_topic(*plan.topic_id, ranking, *judged, config.ir);
        if (!topic_eval) {
            ev.warnings.push_back("topic " + *plan.topic_id +
                                  ": no relevant documents in qrels; IR measures skipped");
            continue;
        }
        aps.push_back(topic_eval->ap);
        ev.topics.push_back(std::move(*topic_eval));
    }
    ev.map = map_over_topics(aps);
    return ev;
}

namespace {

void append_block(std::vector<RankedDoc>& docs, const std::vector<std::string>& ids) {
    for (const auto& id : ids) docs.push_back({id, 0, 0.0});
}

void assign_scores(std::vector<RankedDoc>& docs) {
    const auto n = docs.size();
    for (std::size_t i = 0; i < n; ++i) {
        docs[i].rank = static_cast<int>(i + 1);
        docs[i].score = static_cast<double>(n - i);
    }
}

}  // namespace

RunRanking gold_baseline(std::span<const Review> reviews, const StudyPublicationMap& map,
                         const Qrels* collection) {
    RunRanking run;
    run.tag = "gold";
    for (const auto& review : reviews) {
        const auto relevant = map.publications(review.review_id);
        std::vector<std::string> rest;
        if (collection) {
            if (const auto* judged = collection->topic(review.review_id))
                for (const auto& [pub, _] : *judged)
                    if (!relevant.contains(pub)) rest.push_back(pub);
        }
        if (relevant.empty() && rest.empty()) continue;
        auto& docs = run.topics[review.review_id];
        append_block(docs, {relevant.begin(), relevant.end()});
        append_block(docs, rest);
        assign_scores(docs);
    }
    return run;
}

RunRanking max_with_qrels_baseline(const Qrels& qrels, std::span<const Review> reviews) {
    RunRanking run;
    run.tag = "max-with-qrels";
    for (const auto& review : reviews) {
        const auto* judged = qrels.topic(review.review_id);
        if (!judged || judged->empty()) continue;
        std::vector<std::string> relevant, rest;
        for (const auto& [pub, grade] : *judged) (grade > 0 ? relevant : rest).push_back(pub);
        auto& docs = run.topics[review.review_id];
        append_block(docs, relevant);
        append_block(docs, rest);
        assign_scores(docs);
    }
    return run;
}

}  // namespace oeval
