#include "oeval/evidence.hpp"

#include <cmath>
#include <set>

#include "oeval/error.hpp"

namespace oeval {

std::string_view to_string(DataKind kind) noexcept {
    return kind == DataKind::Dichotomous ? "dichotomous" : "continuous";
}

std::string_view to_string(EffectMeasure measure) noexcept {
    switch (measure) {
        case EffectMeasure::RR: return "RR";
        case EffectMeasure::OR: return "OR";
        case EffectMeasure::RD: return "RD";
        case EffectMeasure::MD: return "MD";
        case EffectMeasure::SMD: return "SMD";
    }
    return "?";
}

std::string_view to_string(Pooling pooling) noexcept {
    return pooling == Pooling::MantelHaenszel ? "mantel_haenszel" : "inverse_variance";
}

std::string_view to_string(Model model) noexcept {
    return model == Model::Fixed ? "fixed" : "random";
}

std::optional<DataKind> parse_data_kind(std::string_view text) noexcept {
    if (text == "dichotomous") return DataKind::Dichotomous;
    if (text == "continuous") return DataKind::Continuous;
    return std::nullopt;
}

std::optional<EffectMeasure> parse_effect_measure(std::string_view text) noexcept {
    if (text == "RR") return EffectMeasure::RR;
    if (text == "OR") return EffectMeasure::OR;
    if (text == "RD") return EffectMeasure::RD;
    if (text == "MD") return EffectMeasure::MD;
    if (text == "SMD") return EffectMeasure::SMD;
    return std::nullopt;
}

std::optional<Pooling> parse_pooling(std::string_view text) noexcept {
    if (text == "mantel_haenszel") return Pooling::MantelHaenszel;
    if (text == "inverse_variance") return Pooling::InverseVariance;
    return std::nullopt;
}

std::optional<Model> parse_model(std::string_view text) noexcept {
    if (text == "fixed") return Model::Fixed;
    if (text == "random") return Model::Random;
    return std::nullopt;
}

std::size_t Outcome::row_count() const noexcept {
    std::size_t n = 0;
    for (const auto& sg : subgroups) n += sg.rows.size();
    return n;
}

std::size_t Review::outcome_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : comparisons) n += c.outcomes.size();
    return n;
}

namespace {

void validate_row(const StudyRow& row, DataKind kind, const std::string& where) {
    if (row.study_id.empty()) throw ValidationError(where, "empty study id");
    if (const auto* d = std::get_if<DichotomousArms>(&row.data)) {
        if (kind != DataKind::Dichotomous)
            throw ValidationError(where, "dichotomous row in a continuous outcome");
        if (d->total_exp < 0 || d->total_ctrl < 0)
            throw ValidationError(where, "negative total");
        if (d->events_exp < 0 || d->events_ctrl < 0)
            throw ValidationError(where, "negative event count");
        if (d->events_exp > d->total_exp)
            throw ValidationError(where, "experimental events exceed total");
        if (d->events_ctrl > d->total_ctrl)
            throw ValidationError(where, "control events exceed total");
        return;
    }
    const auto& c = std::get<ContinuousArms>(row.data);
    if (kind != DataKind::Continuous)
        throw ValidationError(where, "continuous row in a dichotomous outcome");
    if (c.n_exp < 0 || c.n_ctrl < 0) throw ValidationError(where, "negative group size");
    if (!std::isfinite(c.mean_exp) || !std::isfinite(c.mean_ctrl))
        throw ValidationError(where, "non-finite mean");
    if (!(c.sd_exp >= 0.0) || !(c.sd_ctrl >= 0.0) || !std::isfinite(c.sd_exp) ||
        !std::isfinite(c.sd_ctrl))
        throw ValidationError(where, "negative or non-finite standard deviation");
}

}  // namespace

void validate(const Review& review) {
    if (review.review_id.empty()) throw ValidationError("review", "empty review id");
    std::set<std::string> comparison_ids;
    for (const auto& cmp : review.comparisons) {
        const std::string cwhere = "comparison " + cmp.comparison_id;
        if (!comparison_ids.insert(cmp.comparison_id).second)
            throw ValidationError(cwhere, "duplicate comparison id");
        std::set<std::string> outcome_ids;
        for (const auto& out : cmp.outcomes) {
            const std::string owhere = cwhere + " / outcome " + out.outcome_id;
            if (!outcome_ids.insert(out.outcome_id).second)
                throw ValidationError(owhere, "duplicate outcome id");
            if (!measure_fits_kind(out.effect_measure, out.data_kind))
                throw ValidationError(owhere, std::string("effect measure ") +
                                                  std::string(to_string(out.effect_measure)) +
                                                  " does not fit " +
                                                  std::string(to_string(out.data_kind)) + " data");
            if (out.pooling == Pooling::MantelHaenszel && out.data_kind != DataKind::Dichotomous)
                throw ValidationError(owhere, "Mantel-Haenszel pooling requires dichotomous data");
            if (!(out.ci_level > 0.0 && out.ci_level < 1.0))
                throw ValidationError(owhere, "ci_level must lie in (0, 1)");
            if (out.original_ci && out.original_ci->low > out.original_ci->high)
                throw ValidationError(owhere, "original CI low exceeds high");
            if (out.original_ci && out.original_estimate &&
                (*out.original_estimate < out.original_ci->low ||
                 *out.original_estimate > out.original_ci->high))
                throw ValidationError(owhere, "original estimate outside its CI");
            for (const auto& sg : out.subgroups) {
                std::size_t i = 0;
                for (const auto& row : sg.rows) {
                    validate_row(row, out.data_kind,
                                 owhere + " / subgroup " + sg.subgroup_id + " / row " +
                                     std::to_string(i) +
                                     (row.study_id.empty() ? "" : " (" + row.study_id + ")"));
                    ++i;
                }
            }
        }
    }
}

}  // namespace oeval
