#pragma once

// Random-removal simulation: drop n included publications per review,
// re-pool every outcome from the studies that remain found, and compare
// against the original outcomes.

#include <cstdint>
#include <string>
#include <vector>

#include "oeval/aspects.hpp"
#include "oeval/evaluation_corpus.hpp"
#include "oeval/mapping.hpp"

namespace oeval {

struct SimulationSpec {
    std::vector<std::size_t> removal_counts{1, 2, 3, 4, 5, 10, 15, 20, 30, 50, 100};
    std::size_t n_seeds = 20;
    std::uint64_t base_seed = 0;
    ToleranceConfig tolerance;
    unsigned threads = 1;  // 0 = hardware concurrency
};

// Throws ConfigError unless counts are strictly increasing and n_seeds >= 1.
void validate(const SimulationSpec& spec);

struct SimulationColumn {
    std::size_t removal_count = 0;
    std::vector<AggregateTable> per_seed;
    std::vector<double> publication_recall;  // per seed, mean over reviews
    std::vector<double> study_recall;        // per seed, mean over reviews
    MeanAggregate mean;
    double mean_publication_recall = 0.0;
    double mean_study_recall = 0.0;
};

struct SimulationTable {
    AggregateTable gold;
    std::vector<SimulationColumn> columns;
    std::size_t n_reviews = 0;  // reviews that took part
    std::vector<std::string> warnings;
};

// For each (review, seed) a single permutation of the review's publications
// is drawn from stream_seed(base_seed, review_id, seed); removing n takes its
// first min(n, P) entries, so removal sets are nested across counts.
// Studies of the review without any mapped publication can never be removed
// and stay found.
SimulationTable simulate_removals(const EvaluationCorpus& corpus, const StudyPublicationMap& map,
                                  const SimulationSpec& spec);

}  // namespace oeval
