#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace oeval {

// Many-to-many link between studies and the publications that report them,
// scoped per review.
class StudyPublicationMap {
public:
    using Entry = std::tuple<std::string, std::string, std::string>;  // review, study, publication

    StudyPublicationMap() = default;

    // Returns false if the triple was already present.
    bool insert(std::string review_id, std::string study_id, std::string publication_id);

    const std::set<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::set<std::string> reviews() const;
    std::set<std::string> studies(std::string_view review_id) const;
    std::set<std::string> publications(std::string_view review_id) const;
    std::set<std::string> publications_of(std::string_view review_id, std::string_view study_id) const;
    std::set<std::string> studies_of(std::string_view review_id, std::string_view publication_id) const;

private:
    std::set<Entry> entries_;
    // review -> publication -> studies
    std::map<std::string, std::map<std::string, std::set<std::string>, std::less<>>, std::less<>> by_publication_;
    // review -> study -> publications
    std::map<std::string, std::map<std::string, std::set<std::string>, std::less<>>, std::less<>> by_study_;
};

struct MappingParseResult {
    StudyPublicationMap map;
    std::size_t rows_read = 0;
    std::vector<std::string> warnings;
};

// CSV with (at least) the columns review_id, study_id, publication_id.
MappingParseResult parse_mapping(std::string_view bytes);

// A study counts as found iff at least one publication reporting it is in
// `retrieved`. Publications unknown to the map are ignored.
std::set<std::string> studies_found(std::string_view review_id,
                                    const std::set<std::string>& retrieved,
                                    const StudyPublicationMap& map);

}  // namespace oeval
