#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsp {

/// Malformed arguments to a library call (dimension mismatch, invalid weights, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured search cap was hit; callers turn this into an Unknown verdict.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(std::string guard, const std::string& what)
      : std::runtime_error(what), guard_(std::move(guard)) {}
  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

/// Values from different encodings (cyclotomic vs symbolic) were combined.
class ModeMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// Input that cannot be represented exactly by the available value encodings.
class EncodingUnsupported : public InputError {
 public:
  using InputError::InputError;
};

/// Rank data that no matrix with the given eigenvalue sequence achieves.
class NotRealizable : public InputError {
 public:
  using InputError::InputError;
};

/// Text that does not parse; carries a 1-based position.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        message_(what),
        line_(line),
        column_(column) {}
  /// The description without the position suffix.
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed text describing an invalid problem (size mismatch, zero eigenvalue, ...).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsp
