#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Lexical or syntax error in program / expectation text.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Expression evaluated outside its domain (parity of a non-integer, unbound
/// variable, negative expectation, wlp value outside [0,1], ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Caller violated an operation's precondition (Y(sigma) <= 0, nested loop
/// where a loop-free body is required, tau != 0, ...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

} // namespace covar
