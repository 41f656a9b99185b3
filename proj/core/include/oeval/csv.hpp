#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oeval::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  // 1-based source line of each row

    std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180-ish: comma separated, double-quote quoting with "" escapes,
// LF or CRLF line ends, optional UTF-8 BOM. Blank lines are skipped.
// Throws FormatError on ragged rows or unterminated quotes.
Table parse(std::string_view text);

// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace oeval::csv
