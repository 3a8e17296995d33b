#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

enum class ErrorKind {
    InvalidParameter,
    InvalidState,
    NoInformation,
    InsensitiveObservable,
    NumericFailure,
    Truncation,
    Parse,
    Validation,
    Range,
    Io,
};

/**
 * @brief Base exception for every failure raised by the library.
 *
 * The kind is what callers dispatch on (the CLI maps it to an exit code);
 * the message is for humans.
 */
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] auto kind() const noexcept -> ErrorKind { return kind_; }

  private:
    ErrorKind kind_;
};

/// Raised when a truncated Fock space loses more probability than allowed.
class TruncationError : public Error {
  public:
    TruncationError(const std::string &what, int suggested_dim)
        : Error(ErrorKind::Truncation, what), suggested_dim_(suggested_dim) {}

    [[nodiscard]] auto suggested_dim() const noexcept -> int {
        return suggested_dim_;
    }

  private:
    int suggested_dim_;
};

/// Malformed or unknown field in a material file.
class ParseError : public Error {
  public:
    ParseError(const std::string &field, const std::string &what)
        : Error(ErrorKind::Parse, what), field_(field) {}

    [[nodiscard]] auto field() const -> const std::string & { return field_; }

  private:
    std::string field_;
};

/// Minimum of a scanned objective sits on the edge of the search range.
class RangeError : public Error {
  public:
    RangeError(const std::string &what, double boundary_argument)
        : Error(ErrorKind::Range, what), boundary_(boundary_argument) {}

    [[nodiscard]] auto boundary_argument() const noexcept -> double {
        return boundary_;
    }

  private:
    double boundary_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
    throw Error(kind, what);
}

} // namespace qtherm
