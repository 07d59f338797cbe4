#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riskmcdm {

enum class ErrorCode {
  InvalidIntensity,
  IncompleteJudgments,
  DimensionError,
  UnsupportedOrder,
  IncompleteWeights,
  EmptyInput,
  DegenerateScores,
  MissingLineItem,
  ColumnUnavailable,
  UnknownCriterion,
  UndefinedRatio,
  ValidationError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by complete_reciprocal; carries every missing upper-triangle pair
// as 0-based (i, j) with i < j.
class IncompleteJudgments : public Error {
 public:
  explicit IncompleteJudgments(std::vector<std::pair<std::size_t, std::size_t>> missing);

  const std::vector<std::pair<std::size_t, std::size_t>>& missing() const noexcept {
    return missing_;
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> missing_;
};

// Wraps an error with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& inner)
      : Error(inner.code(), stage + ": " + inner.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace riskmcdm
