#include "sv2svt/error.hpp"

#include <utility>

namespace sv2svt {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::kConfig:
      return 2;
    case ErrorCategory::kAdapter:
      return 3;
    case ErrorCategory::kValidation:
      return 4;
  }
  return 1;
}

AdapterError::AdapterError(std::string stage, const std::string& message,
                           std::string diagnostics)
    : Error(ErrorCategory::kAdapter, "stage '" + stage + "': " + message),
      stage_(std::move(stage)),
      diagnostics_(std::move(diagnostics)) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : ValidationError(line == 0 ? message
                                : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

OovError::OovError(std::vector<std::string> words)
    : ValidationError("out-of-vocabulary word(s): " + join(words)),
      words_(std::move(words)) {}

MismatchError::MismatchError(std::string word, const std::string& detail)
    : ValidationError("phoneme mismatch for word '" + word + "': " + detail),
      word_(std::move(word)) {}

UnknownReadingError::UnknownReadingError(std::vector<std::string> words)
    : ValidationError("no reading for word(s): " + join(words)),
      words_(std::move(words)) {}

SchemaError::SchemaError(std::string path, const std::string& detail)
    : ValidationError("schema violation at '" + path + "': " + detail),
      path_(std::move(path)) {}

}  // namespace sv2svt
