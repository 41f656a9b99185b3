#include "oeval/mapping.hpp"

#include "oeval/csv.hpp"
#include "oeval/error.hpp"

namespace oeval {

bool StudyPublicationMap::insert(std::string review_id, std::string study_id,
                                 std::string publication_id) {
    auto [it, inserted] = entries_.emplace(review_id, study_id, publication_id);
    if (!inserted) return false;
    by_publication_[review_id][publication_id].insert(study_id);
    by_study_[review_id][study_id].insert(publication_id);
    return true;
}

std::set<std::string> StudyPublicationMap::reviews() const {
    std::set<std::string> out;
    for (const auto& [review, _] : by_study_) out.insert(review);
    return out;
}

std::set<std::string> StudyPublicationMap::studies(std::string_view review_id) const {
    std::set<std::string> out;
    if (auto it = by_study_.find(review_id); it != by_study_.end())
        for (const auto& [study, _] : it->second) out.insert(study);
    return out;
}

std::set<std::string> StudyPublicationMap::publications(std::string_view review_id) const {
    std::set<std::string> out;
    if (auto it = by_publication_.find(review_id); it != by_publication_.end())
        for (const auto& [pub, _] : it->second) out.insert(pub);
    return out;
}

std::set<std::string> StudyPublicationMap::publications_of(std::string_view review_id,
                                                           std::string_view study_id) const {
    auto it = by_study_.find(review_id);
    if (it == by_study_.end()) return {};
    auto jt = it->second.find(study_id);
    return jt == it->second.end() ? std::set<std::string>{} : jt->second;
}

std::set<std::string> StudyPublicationMap::studies_of(std::string_view review_id,
                                                      std::string_view publication_id) const {
    auto it = by_publication_.find(review_id);
    if (it == by_publication_.end()) return {};
    auto jt = it->second.find(publication_id);
    return jt == it->second.end() ? std::set<std::string>{} : jt->second;
}

MappingParseResult parse_mapping(std::string_view bytes) {
    const csv::Table table = csv::parse(bytes);
    if (table.header.empty()) throw FormatError("mapping: empty file");

    const auto review_col = table.column("review_id");
    const auto study_col = table.column("study_id");
    const auto pub_col = table.column("publication_id");
    for (auto [col, name] : {std::pair{review_col, "review_id"}, std::pair{study_col, "study_id"},
                             std::pair{pub_col, "publication_id"}}) {
        if (!col) throw FormatError(std::string("mapping: missing column '") + name + "'");
    }

    MappingParseResult result;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string& review = row[*review_col];
        const std::string& study = row[*study_col];
        const std::string& pub = row[*pub_col];
        const std::string where = "mapping line " + std::to_string(table.lines[i]);
        if (review.empty() || study.empty() || pub.empty())
            throw FormatError(where + ": empty identifier");
        ++result.rows_read;
        if (!result.map.insert(review, study, pub))
            result.warnings.push_back(where + ": duplicate entry (" + review + ", " + study + ", " +
                                      pub + ") ignored");
    }
    return result;
}

std::set<std::string> studies_found(std::string_view review_id,
                                    const std::set<std::string>& retrieved,
                                    const StudyPublicationMap& map) {
    std::set<std::string> found;
    for (const auto& pub : retrieved)
        for (auto& study : map.studies_of(review_id, pub)) found.insert(std::move(study));
    return found;
}

}  // namespace oeval
