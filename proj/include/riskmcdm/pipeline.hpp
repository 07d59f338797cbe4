#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskmcdm/ahp.hpp"
#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/ratios.hpp"
#include "riskmcdm/saw.hpp"

namespace riskmcdm::pipeline {

enum class EntryPoint { Statements, DecisionMatrix, WeightedMatrix };
std::string_view to_string(EntryPoint e);

inline constexpr int kSchemaVersion = 1;

struct AssessmentConfig {
  std::string hierarchy_path;  // empty: bundled hierarchy
  std::vector<std::string> questionnaire_paths;
  std::string weights_path;  // alternative to questionnaires
  std::string statements_path;
  std::string decision_matrix_path;
  std::string weighted_matrix_path;
  std::string directions_path;  // empty: hierarchy leaf directions
  saw::Normalization normalization = saw::Normalization::MaxMin;
  ratios::ImputationPolicy imputation = ratios::ImputationPolicy::WorstObserved;
  std::string output_dir;
  std::set<std::string> formats{"json"};
  std::size_t top_k = 4;

  // Relative paths in the config resolve against this directory; digests
  // stay keyed by the path as written.
  std::filesystem::path base_dir;

  EntryPoint entry_point() const;
  std::filesystem::path resolve(const std::string& p) const;
  // Throws Error{ValidationError} (IoError for missing files).
  void validate() const;

  static AssessmentConfig from_json(const nlohmann::json& doc, std::filesystem::path base_dir = {});
  static AssessmentConfig load(const std::string& path);
};

struct ConsistencyRecord {
  std::string expert;
  std::string node_id;
  ahp::ConsistencyReport report;
};

struct RankedCriterion {
  std::string id;
  double weight = 0.0;
};

struct RiskReport {
  EntryPoint entry = EntryPoint::WeightedMatrix;
  saw::Normalization normalization = saw::Normalization::MaxMin;
  ratios::ImputationPolicy imputation = ratios::ImputationPolicy::WorstObserved;
  Hierarchy hierarchy;
  ahp::LocalWeights local;
  ahp::GlobalWeights global;
  std::vector<ConsistencyRecord> consistency;
  std::vector<std::string> warnings;
  std::optional<saw::DecisionMatrix> decision_matrix;
  std::optional<saw::NormalizedMatrix> normalized;
  saw::WeightedMatrix weighted;
  saw::ScoreTable scores;
  std::string most_risky;
  std::string least_risky;
  std::vector<RankedCriterion> top_criteria;
  std::vector<std::pair<std::string, std::string>> imputation_flags;  // (alternative, criterion)
  std::map<std::string, std::string> input_digests;
};

RiskReport run_assessment(const AssessmentConfig& cfg);

// Leaves by global weight descending; ties by canonical symbol order, then id.
std::vector<RankedCriterion> top_risk_criteria(const ahp::GlobalWeights& weights, std::size_t k);

// Canonical report document. `artifacts` maps artifact kind to file name.
nlohmann::json report_json(const RiskReport& r, const std::map<std::string, std::string>& artifacts = {});
std::string canonical_dump(const nlohmann::json& doc);

// Writes the requested formats ("json", "csv", "svg") into `dir` and returns
// the written paths in creation order.
std::vector<std::filesystem::path> emit_report(const RiskReport& r, const std::filesystem::path& dir,
                                               const std::set<std::string>& formats);

// Columns: (rank, AWS1, sub-rank, AWS2, criterion, AWS3, main).
std::string weights_csv(const RiskReport& r);
// Columns: (alternative, V, A, rank).
std::string scores_csv(const RiskReport& r);

struct Bar {
  std::string label;
  double value = 0.0;
};
std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars);

}  // namespace riskmcdm::pipeline
