#include "oeval/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "oeval/error.hpp"
#include "oeval/rng.hpp"

namespace oeval {

void validate(const SimulationSpec& spec) {
    if (spec.n_seeds == 0) throw ConfigError("number of seeds must be at least 1");
    if (spec.removal_counts.empty()) throw ConfigError("at least one removal count is required");
    for (std::size_t i = 1; i < spec.removal_counts.size(); ++i)
        if (spec.removal_counts[i] <= spec.removal_counts[i - 1])
            throw ConfigError("removal counts must be strictly increasing");
}

namespace {

struct ReviewPlan {
    std::size_t review_index;
    std::string review_id;
    std::vector<std::string> publications;  // sorted
    std::set<std::string> mapped_studies;
    std::set<std::string> unmapped_studies;  // rows with no publication in the map
};

struct SeedResult {
    std::vector<AggregateTable> tables;  // per column
    std::vector<double> pub_recall;      // per column
    std::vector<double> study_recall;    // per column
};

SeedResult run_seed(const EvaluationCorpus& corpus, const StudyPublicationMap& map,
                    const SimulationSpec& spec, const std::vector<ReviewPlan>& plans,
                    std::size_t seed) {
    const std::size_t n_columns = spec.removal_counts.size();
    std::vector<std::vector<AspectReport>> reports(n_columns);
    SeedResult result;
    result.pub_recall.assign(n_columns, 0.0);
    result.study_recall.assign(n_columns, 0.0);

    for (const auto& plan : plans) {
        SplitMix64 rng(stream_seed(spec.base_seed, plan.review_id, seed));
        std::vector<std::string> order = plan.publications;
        const std::size_t total = order.size();
        partial_shuffle(order, std::min(spec.removal_counts.back(), total), rng);

        for (std::size_t col = 0; col < n_columns; ++col) {
            const std::size_t removed = std::min(spec.removal_counts[col], total);
            const std::set<std::string> retrieved(order.begin() + static_cast<std::ptrdiff_t>(removed),
                                                  order.end());
            std::set<std::string> found = studies_found(plan.review_id, retrieved, map);
            const std::size_t mapped_found = found.size();
            found.insert(plan.unmapped_studies.begin(), plan.unmapped_studies.end());

            result.pub_recall[col] += static_cast<double>(total - removed) / static_cast<double>(total);
            result.study_recall[col] +=
                static_cast<double>(mapped_found) / static_cast<double>(plan.mapped_studies.size());

            for (const auto& gold : corpus.outcomes_of(plan.review_index)) {
                const PooledOutcome predicted = pool_outcome(corpus.outcome(gold), found);
                reports[col].push_back(aspect_report(gold.pooled, predicted, spec.tolerance));
            }
        }
    }

    const double n_reviews = static_cast<double>(plans.size());
    for (std::size_t col = 0; col < n_columns; ++col) {
        result.tables.push_back(aggregate(reports[col]));
        if (n_reviews > 0) {
            result.pub_recall[col] /= n_reviews;
            result.study_recall[col] /= n_reviews;
        }
    }
    return result;
}

}  // namespace

SimulationTable simulate_removals(const EvaluationCorpus& corpus, const StudyPublicationMap& map,
                                  const SimulationSpec& spec) {
    validate(spec);
    SimulationTable table;

    std::vector<ReviewPlan> plans;
    for (std::size_t r = 0; r < corpus.reviews().size(); ++r) {
        const Review& review = corpus.reviews()[r];
        const auto pubs = map.publications(review.review_id);
        if (pubs.empty()) {
            table.warnings.push_back("review " + review.review_id +
                                     ": no included publications in the mapping; skipped");
            continue;
        }
        ReviewPlan plan{r, review.review_id, {pubs.begin(), pubs.end()},
                        map.studies(review.review_id), {}};
        for (const auto& gold : corpus.outcomes_of(r))
            for (const auto& sg : corpus.outcome(gold).subgroups)
                for (const auto& row : sg.rows)
                    if (!plan.mapped_studies.contains(row.study_id))
                        plan.unmapped_studies.insert(row.study_id);
        plans.push_back(std::move(plan));
    }
    table.n_reviews = plans.size();

    std::vector<AspectReport> gold_reports;
    for (const auto& plan : plans)
        for (const auto& gold : corpus.outcomes_of(plan.review_index))
            gold_reports.push_back(aspect_report(gold.pooled, gold.pooled, spec.tolerance));
    table.gold = aggregate(gold_reports);

    std::vector<SeedResult> seeds(spec.n_seeds);
    unsigned workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : spec.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.n_seeds));
    if (workers <= 1) {
        for (std::size_t s = 0; s < spec.n_seeds; ++s)
            seeds[s] = run_seed(corpus, map, spec, plans, s);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t s = next++; s < spec.n_seeds; s = next++)
                    seeds[s] = run_seed(corpus, map, spec, plans, s);
            });
    }

    for (std::size_t col = 0; col < spec.removal_counts.size(); ++col) {
        SimulationColumn column;
        column.removal_count = spec.removal_counts[col];
        double pub_sum = 0.0, study_sum = 0.0;
        for (const auto& seed : seeds) {
            column.per_seed.push_back(seed.tables[col]);
            column.publication_recall.push_back(seed.pub_recall[col]);
            column.study_recall.push_back(seed.study_recall[col]);
            pub_sum += seed.pub_recall[col];
            study_sum += seed.study_recall[col];
        }
        column.mean = mean_of(column.per_seed);
        column.mean_publication_recall = pub_sum / static_cast<double>(spec.n_seeds);
        column.mean_study_recall = study_sum / static_cast<double>(spec.n_seeds);
        table.columns.push_back(std::move(column));
    }
    return table;
}

}  // namespace oeval
