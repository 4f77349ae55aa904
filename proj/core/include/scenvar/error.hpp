#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scenvar {

/// Base class of every error raised by the library. `code()` is a stable,
/// kebab-case identifier suitable for machine consumption (API payloads, CLI
/// output); `what()` carries the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message) : Error("format-error", message) {}
};

class LabelError : public Error {
 public:
  explicit LabelError(const std::string& message) : Error("invalid-label", message) {}
};

class TransformError : public Error {
 public:
  explicit TransformError(const std::string& message) : Error("transform-error", message) {}
};

class DegenerateSeriesError : public Error {
 public:
  explicit DegenerateSeriesError(const std::string& message)
      : Error("degenerate-series", message) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& message) : Error("alignment-error", message) {}
};

class SampleSizeError : public Error {
 public:
  explicit SampleSizeError(const std::string& message) : Error("sample-size", message) {}
};

/// Raised when the regression design is rank deficient; `columns()` names the
/// design columns that were found to be linearly dependent (or constant).
class SingularDesignError : public Error {
 public:
  SingularDesignError(const std::string& message, std::vector<std::string> columns)
      : Error("singular-design", message), columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

class SelectionError : public Error {
 public:
  explicit SelectionError(const std::string& message) : Error("selection-error", message) {}
};

class ExogenousRequiredError : public Error {
 public:
  explicit ExogenousRequiredError(const std::string& message)
      : Error("exogenous-required", message) {}
};

class InstabilityError : public Error {
 public:
  explicit InstabilityError(const std::string& message) : Error("instability", message) {}
};

}  // namespace scenvar
