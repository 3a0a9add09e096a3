#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sv2svt {

/// Coarse error classes. Each maps to one process exit code in the CLI.
enum class ErrorCategory {
  kConfig,      // exit 2
  kAdapter,     // exit 3
  kValidation,  // exit 4
};

int exit_code_for(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kConfig, message) {}
};

/// A stage adapter failed: nonzero exit, timeout, or unreadable output.
class AdapterError : public Error {
 public:
  AdapterError(std::string stage, const std::string& message,
               std::string diagnostics = {});

  const std::string& stage() const noexcept { return stage_; }
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string stage_;
  std::string diagnostics_;
};

/// Base of every core data error (bad input, broken invariant).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::kValidation, message) {}
};

class ParseError : public ValidationError {
 public:
  /// `line` is 1-based; 0 when the error is not tied to a line.
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Timed labels violate ordering (rows out of order or overlapping).
class AlignmentError : public ParseError {
 public:
  using ParseError::ParseError;
};

class NoNucleusError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OovError : public ValidationError {
 public:
  explicit OovError(std::vector<std::string> words);

  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::vector<std::string> words_;
};

class MismatchError : public ValidationError {
 public:
  MismatchError(std::string word, const std::string& detail);

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyMelodyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotKanaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TokenizationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownReadingError : public ValidationError {
 public:
  explicit UnknownReadingError(std::vector<std::string> words);

  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::vector<std::string> words_;
};

class NoCandidatesError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OverflowError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Document does not match an interchange schema. `path` names the field,
/// e.g. `notes[2].onset_s`.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& detail);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class StatsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace sv2svt
