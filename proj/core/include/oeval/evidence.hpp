#pragma once

// Review statistical data: comparisons -> outcomes -> subgroups -> study rows.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oeval {

enum class DataKind { Dichotomous, Continuous };
enum class EffectMeasure { RR, OR, RD, MD, SMD };
enum class Pooling { MantelHaenszel, InverseVariance };
enum class Model { Fixed, Random };

std::string_view to_string(DataKind kind) noexcept;
std::string_view to_string(EffectMeasure measure) noexcept;
std::string_view to_string(Pooling pooling) noexcept;
std::string_view to_string(Model model) noexcept;

std::optional<DataKind> parse_data_kind(std::string_view text) noexcept;
std::optional<EffectMeasure> parse_effect_measure(std::string_view text) noexcept;
std::optional<Pooling> parse_pooling(std::string_view text) noexcept;
std::optional<Model> parse_model(std::string_view text) noexcept;

// RR and OR are analysed on the log scale.
constexpr bool is_ratio_measure(EffectMeasure m) noexcept {
    return m == EffectMeasure::RR || m == EffectMeasure::OR;
}

constexpr bool measure_fits_kind(EffectMeasure m, DataKind kind) noexcept {
    if (kind == DataKind::Dichotomous)
        return m == EffectMeasure::RR || m == EffectMeasure::OR || m == EffectMeasure::RD;
    return m == EffectMeasure::MD || m == EffectMeasure::SMD;
}

// The no-effect value: 1 for ratio measures, 0 for difference measures.
constexpr double null_value(EffectMeasure m) noexcept { return is_ratio_measure(m) ? 1.0 : 0.0; }

struct DichotomousArms {
    std::int64_t events_exp = 0;
    std::int64_t total_exp = 0;
    std::int64_t events_ctrl = 0;
    std::int64_t total_ctrl = 0;

    bool operator==(const DichotomousArms&) const = default;
};

struct ContinuousArms {
    std::int64_t n_exp = 0;
    double mean_exp = 0.0;
    double sd_exp = 0.0;
    std::int64_t n_ctrl = 0;
    double mean_ctrl = 0.0;
    double sd_ctrl = 0.0;

    bool operator==(const ContinuousArms&) const = default;
};

using ArmData = std::variant<DichotomousArms, ContinuousArms>;

struct StudyRow {
    std::string study_id;
    ArmData data;

    bool operator==(const StudyRow&) const = default;
};

struct Subgroup {
    std::string subgroup_id;
    std::string name;
    std::vector<StudyRow> rows;

    bool operator==(const Subgroup&) const = default;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool operator==(const Interval&) const = default;
};

struct Outcome {
    std::string outcome_id;
    std::string name;
    DataKind data_kind = DataKind::Dichotomous;
    EffectMeasure effect_measure = EffectMeasure::RR;
    Pooling pooling = Pooling::MantelHaenszel;
    Model model = Model::Fixed;
    double ci_level = 0.95;
    std::vector<Subgroup> subgroups;
    // Totals as published in the source file, if present.
    std::optional<double> original_estimate;
    std::optional<Interval> original_ci;

    std::size_t row_count() const noexcept;

    bool operator==(const Outcome&) const = default;
};

struct Comparison {
    std::string comparison_id;
    std::string name;
    std::vector<Outcome> outcomes;

    bool operator==(const Comparison&) const = default;
};

// An outcome present in the source but of a type this library does not pool
// (ordinal, count, time-to-event, Peto OR, ...).
struct SkippedOutcome {
    std::string comparison_id;
    std::string outcome_id;
    std::string reason;

    bool operator==(const SkippedOutcome&) const = default;
};

struct Review {
    std::string review_id;
    std::vector<Comparison> comparisons;
    std::vector<SkippedOutcome> skipped;

    std::size_t outcome_count() const noexcept;

    bool operator==(const Review&) const = default;
};

// Throws ValidationError on the first violated invariant. Both review parsers
// call this before returning, so every Review handed out is valid.
void validate(const Review& review);

}  // namespace oeval
