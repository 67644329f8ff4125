#pragma once

#include <stdexcept>
#include <string>

namespace cotx {

// Bad arguments or violated preconditions (CLI exit code 1).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A symbol or word outside the declared alphabet.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed input text; carries a 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace cotx
