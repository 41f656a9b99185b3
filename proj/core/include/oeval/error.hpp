#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace oeval {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input could not be tokenized/parsed. Carries a byte offset (XML) or a
// 1-based line number (text formats) when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what,
               std::optional<std::size_t> byte_offset = std::nullopt,
               std::optional<std::size_t> line = std::nullopt);

    std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> byte_offset_;
    std::optional<std::size_t> line_;
};

// Input parsed but violates a domain invariant (events > total, sd < 0, ...).
// `where` names the offending element, row or JSON path.
class ValidationError : public Error {
public:
    ValidationError(std::string where, const std::string& what);

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

// Tabular input with a wrong header or column count.
class FormatError : public Error {
public:
    using Error::Error;
};

// Invalid configuration (bad cutoffs, zero seeds, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace oeval
