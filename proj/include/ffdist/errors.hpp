#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffdist {

// Bad input from a user: malformed text, inconsistent options, unreadable
// files. The CLI maps these to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed token in element-list or file syntax; `position` is a 0-based
// byte offset into the parsed text.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : UsageError(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A brute-force enumeration would exceed its configured size limit.
class GuardExceeded : public UsageError {
 public:
  using UsageError::UsageError;
};

// An exact identity or a theorem-backed inequality failed. Either the code
// has a bug or the checked statement is false; the CLI maps this to exit 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ffdist
