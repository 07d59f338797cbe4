#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskmcdm/ahp.hpp"
#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/rational.hpp"

namespace riskmcdm {

struct ExpertInfo {
  std::string name;
  int experience_years = 0;
  std::string degree;
};

struct JudgmentEntry {
  std::size_t i = 0;  // 0-based, i < j
  std::size_t j = 0;
  Rational value;     // cell a_ij
};

// questionnaire.json: {expert: {name, experience_years, degree},
//                      judgments: {node_id: [{i, j, value}]}}
struct Questionnaire {
  ExpertInfo expert;
  std::map<std::string, std::vector<JudgmentEntry>> judgments;
};

ExpertInfo expert_from_json(const nlohmann::json& j);
nlohmann::json expert_to_json(const ExpertInfo& e);
Questionnaire questionnaire_from_json(const nlohmann::json& doc);
nlohmann::json questionnaire_to_json(const Questionnaire& q);
Questionnaire load_questionnaire(const std::string& path);

struct NodeResult {
  std::string node_id;
  ahp::WeightVector weights;
  ahp::ConsistencyReport consistency;
};

struct ExpertResult {
  ExpertInfo expert;
  std::vector<NodeResult> nodes;  // hierarchy comparison-node order
};

struct AhpResult {
  std::vector<ExpertResult> experts;
  ahp::LocalWeights averaged;  // "goal" plus one entry per non-leaf main criterion
  ahp::GlobalWeights global;
};

// Builds every comparison matrix of one expert and derives its weights.
ExpertResult evaluate_questionnaire(const Hierarchy& h, const Questionnaire& q);

ahp::PairwiseMatrix node_matrix(const ComparisonNode& node, const std::vector<JudgmentEntry>& entries);

// Per-expert derivation, per-node averaging across experts, global weights.
AhpResult run_ahp(const Hierarchy& h, std::span<const Questionnaire> questionnaires);

// Averaged vectors from a weights.json document (`averaged.main`,
// `averaged.local`), ordered by the hierarchy and renormalized.
ahp::LocalWeights local_weights_from_json(const Hierarchy& h, const nlohmann::json& doc);
ahp::LocalWeights load_local_weights(const Hierarchy& h, const std::string& path);

// weights.json body. Numbers pass through canonical formatting.
nlohmann::json weights_json(const Hierarchy& h, const AhpResult& result);
nlohmann::json consistency_json(const std::string& expert, const NodeResult& node);

}  // namespace riskmcdm
