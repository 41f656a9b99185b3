#include "oeval/error.hpp"

namespace oeval {

ParseError::ParseError(const std::string& what, std::optional<std::size_t> byte_offset,
                       std::optional<std::size_t> line)
    : Error(what), byte_offset_(byte_offset), line_(line) {}

ValidationError::ValidationError(std::string where, const std::string& what)
    : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

}  // namespace oeval
