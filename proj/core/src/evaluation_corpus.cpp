#include "oeval/evaluation_corpus.hpp"

#include <set>

#include "oeval/error.hpp"

namespace oeval {

EvaluationCorpus::EvaluationCorpus(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
    std::set<std::string> seen;
    for (std::size_t r = 0; r < reviews_.size(); ++r) {
        const Review& review = reviews_[r];
        if (!seen.insert(review.review_id).second)
            throw ValidationError("review " + review.review_id, "duplicate review id in corpus");
        const std::size_t begin = outcomes_.size();
        for (std::size_t c = 0; c < review.comparisons.size(); ++c) {
            const Comparison& cmp = review.comparisons[c];
            for (std::size_t o = 0; o < cmp.outcomes.size(); ++o) {
                PooledOutcome gold = pool_outcome(cmp.outcomes[o]);
                if (!gold.estimable) {
                    excluded_.push_back({{review.review_id, cmp.comparison_id, cmp.outcomes[o].outcome_id},
                                         cmp.outcomes[o].row_count() == 0
                                             ? "no study rows"
                                             : "original outcome not estimable"});
                    continue;
                }
                outcomes_.push_back({r, c, o, std::move(gold)});
            }
        }
        ranges_.emplace_back(begin, outcomes_.size());
    }
}

std::span<const GoldOutcome> EvaluationCorpus::outcomes_of(std::size_t review_index) const {
    const auto [begin, end] = ranges_.at(review_index);
    return std::span<const GoldOutcome>(outcomes_).subspan(begin, end - begin);
}

const Outcome& EvaluationCorpus::outcome(const GoldOutcome& gold) const {
    return reviews_[gold.review].comparisons[gold.comparison].outcomes[gold.outcome];
}

OutcomeKey EvaluationCorpus::key(const GoldOutcome& gold) const {
    const Review& review = reviews_[gold.review];
    const Comparison& cmp = review.comparisons[gold.comparison];
    return {review.review_id, cmp.comparison_id, cmp.outcomes[gold.outcome].outcome_id};
}

std::optional<std::size_t> EvaluationCorpus::find_review(std::string_view review_id) const {
    for (std::size_t i = 0; i < reviews_.size(); ++i)
        if (reviews_[i].review_id == review_id) return i;
    return std::nullopt;
}

}  // namespace oeval
