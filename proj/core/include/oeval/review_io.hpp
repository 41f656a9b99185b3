#pragma once

// Readers and writers for review statistical data.
//
// Two input formats are accepted:
//   * a RevMan 5 XML subset (COMPARISON / DICH_OUTCOME / CONT_OUTCOME ...)
//   * the canonical JSON document produced by emit_review_json().

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oeval/evidence.hpp"

namespace oeval {

// `fallback_id` is used when the document carries no review identifier
// (typically the file stem).
Review parse_review_xml(std::string_view bytes, std::string_view fallback_id = {});

Review parse_review_json(std::string_view bytes);

// Canonical JSON, stable key order, two-space indent.
std::string emit_review_json(const Review& review);

struct Corpus {
    std::vector<Review> reviews;
    std::vector<std::filesystem::path> sources;  // parallel to `reviews`
};

// Loads every *.xml and *.json file in `dir` (non-recursive), sorted by file
// name. Errors from individual files are rethrown with the file name
// prepended. Throws ConfigError if the directory holds no review files.
Corpus load_corpus(const std::filesystem::path& dir);

Review load_review_file(const std::filesystem::path& file);

std::string read_file(const std::filesystem::path& file);

}  // namespace oeval
