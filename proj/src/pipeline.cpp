#include "riskmcdm/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "riskmcdm/canonical.hpp"
#include "riskmcdm/error.hpp"
#include "riskmcdm/questionnaire.hpp"

namespace riskmcdm::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(EntryPoint e) {
  switch (e) {
    case EntryPoint::Statements: return "statements";
    case EntryPoint::DecisionMatrix: return "decision_matrix";
    case EntryPoint::WeightedMatrix: return "weighted_matrix";
  }
  return "";
}

EntryPoint AssessmentConfig::entry_point() const {
  if (!statements_path.empty()) return EntryPoint::Statements;
  if (!decision_matrix_path.empty()) return EntryPoint::DecisionMatrix;
  return EntryPoint::WeightedMatrix;
}

fs::path AssessmentConfig::resolve(const std::string& p) const {
  const fs::path path(p);
  if (path.is_absolute() || base_dir.empty()) return path;
  return base_dir / path;
}

void AssessmentConfig::validate() const {
  const int entries = int(!statements_path.empty()) + int(!decision_matrix_path.empty()) +
                      int(!weighted_matrix_path.empty());
  if (entries != 1) {
    throw Error(ErrorCode::ValidationError,
                "exactly one of statements, decision matrix or weighted matrix must be given (got " +
                    std::to_string(entries) + ")");
  }
  if (questionnaire_paths.empty() == weights_path.empty()) {
    throw Error(ErrorCode::ValidationError, "give either questionnaires or a weights file, not both or neither");
  }
  for (const auto& f : formats) {
    if (f != "json" && f != "csv" && f != "svg") throw Error(ErrorCode::ValidationError, "unknown format '" + f + "'");
  }
  std::vector<std::string> files = questionnaire_paths;
  for (const auto* p : {&hierarchy_path, &weights_path, &statements_path, &decision_matrix_path,
                        &weighted_matrix_path, &directions_path}) {
    if (!p->empty()) files.push_back(*p);
  }
  for (const auto& f : files) {
    if (!fs::exists(resolve(f))) throw Error(ErrorCode::IoError, "input file '" + f + "' does not exist");
  }
}

AssessmentConfig AssessmentConfig::from_json(const json& doc, fs::path base_dir) {
  AssessmentConfig cfg;
  cfg.base_dir = std::move(base_dir);
  static const std::set<std::string> kKeys = {"hierarchy",  "questionnaires", "weights",     "statements",
                                              "decision_matrix", "weighted_matrix", "directions",
                                              "normalization", "imputation", "output_dir", "formats", "top_k"};
  if (!doc.is_object()) throw Error(ErrorCode::ValidationError, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) throw Error(ErrorCode::ValidationError, "unknown config key '" + key + "'");
  }
  try {
    cfg.hierarchy_path = doc.value("hierarchy", "");
    cfg.questionnaire_paths = doc.value("questionnaires", std::vector<std::string>{});
    cfg.weights_path = doc.value("weights", "");
    cfg.statements_path = doc.value("statements", "");
    cfg.decision_matrix_path = doc.value("decision_matrix", "");
    cfg.weighted_matrix_path = doc.value("weighted_matrix", "");
    cfg.directions_path = doc.value("directions", "");
    cfg.normalization = saw::parse_normalization(doc.value("normalization", "max-min"));
    cfg.imputation = ratios::parse_imputation(doc.value("imputation", "worst-observed"));
    cfg.output_dir = doc.value("output_dir", "");
    if (doc.contains("formats")) {
      const auto list = doc.at("formats").get<std::vector<std::string>>();
      cfg.formats = {list.begin(), list.end()};
    }
    cfg.top_k = doc.value("top_k", std::size_t{4});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed config: ") + e.what());
  }
  return cfg;
}

AssessmentConfig AssessmentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "config '" + path + "' is not JSON: " + e.what());
  }
  return from_json(doc, fs::path(path).parent_path());
}

std::vector<RankedCriterion> top_risk_criteria(const ahp::GlobalWeights& weights, std::size_t k) {
  if (k > weights.size()) {
    throw Error(ErrorCode::ValidationError, "asked for " + std::to_string(k) + " criteria but only " +
                                                std::to_string(weights.size()) + " exist");
  }
  std::vector<RankedCriterion> all;
  for (const auto& [id, w] : weights) all.push_back({id, w});
  const auto key = [](const std::string& id) {
    return std::make_pair(canonical_index(id).value_or(standard_symbols().size()), id);
  };
  std::stable_sort(all.begin(), all.end(), [&](const RankedCriterion& a, const RankedCriterion& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return key(a.id) < key(b.id);
  });
  all.resize(k);
  return all;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

void check_columns(const Hierarchy& h, const std::vector<std::string>& columns, const char* what) {
  auto leaves = h.leaf_ids();
  auto cols = columns;
  std::sort(leaves.begin(), leaves.end());
  std::sort(cols.begin(), cols.end());
  if (leaves != cols) {
    throw Error(ErrorCode::ValidationError,
                std::string(what) + " columns do not match the hierarchy's leaf criteria");
  }
}

void check_rows(const Hierarchy& h, const std::vector<std::string>& rows, const char* what) {
  if (rows != h.alternatives) {
    spdlog::warn("{} rows differ from the hierarchy alternatives; using the matrix rows", what);
  }
}

}  // namespace

RiskReport run_assessment(const AssessmentConfig& cfg) {
  cfg.validate();
  RiskReport r;
  r.entry = cfg.entry_point();
  r.normalization = cfg.normalization;
  r.imputation = cfg.imputation;

  const auto digest = [&](const std::string& p) { r.input_digests[p] = sha256_file(cfg.resolve(p).string()); };

  r.hierarchy = stage("hierarchy", [&] {
    if (cfg.hierarchy_path.empty()) {
      r.input_digests["<bundled>/paper-hierarchy.json"] = sha256_hex(bundled_hierarchy_json());
      return bundled_hierarchy();
    }
    digest(cfg.hierarchy_path);
    return load_hierarchy(cfg.resolve(cfg.hierarchy_path).string());
  });
  stage("hierarchy", [&] { require_valid(r.hierarchy); });
  const Hierarchy& h = r.hierarchy;

  stage("ahp", [&] {
    if (!cfg.weights_path.empty()) {
      digest(cfg.weights_path);
      r.local = load_local_weights(h, cfg.resolve(cfg.weights_path).string());
      r.global = ahp::global_weights(h, r.local);
      return;
    }
    std::vector<Questionnaire> qs;
    for (const auto& p : cfg.questionnaire_paths) {
      digest(p);
      qs.push_back(load_questionnaire(cfg.resolve(p).string()));
    }
    auto result = run_ahp(h, qs);
    for (const auto& e : result.experts) {
      for (const auto& node : e.nodes) {
        r.consistency.push_back({e.expert.name, node.node_id, node.consistency});
        if (node.consistency.verdict == ahp::Verdict::NeedsRevision) {
          r.warnings.push_back("expert '" + e.expert.name + "' node '" + node.node_id + "': CR " +
                               format_canonical(node.consistency.cr) + " >= 0.10, judgments need revision");
          spdlog::warn("{}", r.warnings.back());
        }
      }
    }
    r.local = std::move(result.averaged);
    r.global = std::move(result.global);
  });

  const auto dirs = stage("directions", [&] {
    if (cfg.directions_path.empty()) return saw::DirectionVector::from_hierarchy(h);
    digest(cfg.directions_path);
    return saw::read_directions_file(cfg.resolve(cfg.directions_path).string());
  });

  if (r.entry == EntryPoint::Statements) {
    r.decision_matrix = stage("ratios", [&] {
      digest(cfg.statements_path);
      const auto years = ratios::load_statements(cfg.resolve(cfg.statements_path).string());
      std::vector<ratios::RatioDefinition> defs;
      for (const auto* leaf : h.leaves()) {
        auto def = ratios::definition_of(leaf->ratio_ref.value_or(leaf->id));
        def.id = leaf->id;
        def.direction = dirs.of(leaf->id);
        defs.push_back(std::move(def));
      }
      return ratios::build_decision_matrix(years, defs, cfg.imputation);
    });
  } else if (r.entry == EntryPoint::DecisionMatrix) {
    r.decision_matrix = stage("load", [&] {
      digest(cfg.decision_matrix_path);
      return saw::read_matrix_csv_file(cfg.resolve(cfg.decision_matrix_path).string());
    });
  }

  if (r.decision_matrix) {
    const auto& d = *r.decision_matrix;
    stage("saw", [&] {
      check_columns(h, d.criterion_ids, "decision matrix");
      check_rows(h, d.alternative_ids, "decision matrix");
    });
    for (std::size_t j = 0; j < d.criterion_ids.size(); ++j) {
      for (std::size_t i = 0; i < d.alternative_ids.size(); ++i) {
        if (d.cell_status(i, j) == saw::CellStatus::Imputed) {
          r.imputation_flags.emplace_back(d.alternative_ids[i], d.criterion_ids[j]);
        }
      }
    }
    r.normalized = stage("saw", [&] { return saw::normalize(d, dirs, cfg.normalization); });
    saw::CriterionWeights w(r.global.begin(), r.global.end());
    r.weighted = stage("saw", [&] { return saw::apply_weights(*r.normalized, w); });
  } else {
    r.weighted = stage("load", [&] {
      digest(cfg.weighted_matrix_path);
      const auto m = saw::read_matrix_csv_file(cfg.resolve(cfg.weighted_matrix_path).string());
      return saw::WeightedMatrix{m.alternative_ids, m.criterion_ids, m.values};
    });
    stage("saw", [&] {
      check_columns(h, r.weighted.criterion_ids, "weighted matrix");
      check_rows(h, r.weighted.alternative_ids, "weighted matrix");
    });
  }

  r.scores = stage("saw", [&] { return saw::rank(saw::score(r.weighted), r.weighted.alternative_ids); });
  r.most_risky = r.scores.alternative_ids[r.scores.index_of_rank(1)];
  r.least_risky = r.scores.alternative_ids[r.scores.index_of_rank(static_cast<int>(r.scores.ranks.size()))];
  r.top_criteria = stage("report", [&] { return top_risk_criteria(r.global, std::min(cfg.top_k, r.global.size())); });
  return r;
}

}  // namespace riskmcdm::pipeline
