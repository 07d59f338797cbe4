#include "riskmcdm/error.hpp"

namespace riskmcdm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIntensity: return "InvalidIntensity";
    case ErrorCode::IncompleteJudgments: return "IncompleteJudgments";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::IncompleteWeights: return "IncompleteWeights";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateScores: return "DegenerateScores";
    case ErrorCode::MissingLineItem: return "MissingLineItem";
    case ErrorCode::ColumnUnavailable: return "ColumnUnavailable";
    case ErrorCode::UnknownCriterion: return "UnknownCriterion";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string describe_missing(const std::vector<std::pair<std::size_t, std::size_t>>& missing) {
  std::string out = "missing judgments:";
  for (const auto& [i, j] : missing) {
    out += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return out;
}

}  // namespace

IncompleteJudgments::IncompleteJudgments(std::vector<std::pair<std::size_t, std::size_t>> missing)
    : Error(ErrorCode::IncompleteJudgments, describe_missing(missing)),
      missing_(std::move(missing)) {}

}  // namespace riskmcdm
