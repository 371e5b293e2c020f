#ifndef CANLINK_ERRORS_HPP
#define CANLINK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace canlink {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed polynomial text. Carries the byte offset of the failure.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

// An operation's mathematical precondition does not hold (bad quadratic
// part, singular matrix, mismatched tables, ...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

// A configurable resource ceiling (term count, search bound) was exceeded.
class ResourceLimitError : public Error {
  public:
    using Error::Error;
};

// An identity that should hold by construction failed; indicates a bug or
// transcription error, never user input.
class InternalCheckError : public Error {
  public:
    using Error::Error;
};

} // namespace canlink

#endif
