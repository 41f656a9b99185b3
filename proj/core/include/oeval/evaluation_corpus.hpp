#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oeval/evidence.hpp"
#include "oeval/meta_analysis.hpp"

namespace oeval {

struct OutcomeKey {
    std::string review_id;
    std::string comparison_id;
    std::string outcome_id;

    auto operator<=>(const OutcomeKey&) const = default;
};

// An outcome of the evaluation universe together with its original result,
// pooled from all of its rows.
struct GoldOutcome {
    std::size_t review = 0;
    std::size_t comparison = 0;
    std::size_t outcome = 0;
    PooledOutcome pooled;
};

struct ExcludedOutcome {
    OutcomeKey key;
    std::string reason;
};

// Reviews plus their pre-pooled original outcomes. Outcomes whose original
// pool is not estimable are left out of the universe and listed in
// excluded().
class EvaluationCorpus {
public:
    explicit EvaluationCorpus(std::vector<Review> reviews);

    const std::vector<Review>& reviews() const noexcept { return reviews_; }
    std::span<const GoldOutcome> outcomes() const noexcept { return outcomes_; }
    std::span<const GoldOutcome> outcomes_of(std::size_t review_index) const;
    const std::vector<ExcludedOutcome>& excluded() const noexcept { return excluded_; }

    const Outcome& outcome(const GoldOutcome& gold) const;
    OutcomeKey key(const GoldOutcome& gold) const;
    std::optional<std::size_t> find_review(std::string_view review_id) const;

private:
    std::vector<Review> reviews_;
    std::vector<GoldOutcome> outcomes_;
    std::vector<std::pair<std::size_t, std::size_t>> ranges_;  // per review [begin, end)
    std::vector<ExcludedOutcome> excluded_;
};

}  // namespace oeval
