#include "riskmcdm/questionnaire.hpp"

#include <fstream>
#include <set>

#include "riskmcdm/canonical.hpp"
#include "riskmcdm/error.hpp"

namespace riskmcdm {

using nlohmann::json;

namespace {

Rational value_from_json(const json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>(), 1);
  if (v.is_number()) return Rational::parse(v.dump());
  throw Error(ErrorCode::InvalidIntensity, "judgment value must be a number or fraction string");
}

}  // namespace

ExpertInfo expert_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ValidationError, "expert must be an object");
  ExpertInfo e;
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
    throw Error(ErrorCode::ValidationError, "expert.name is required");
  }
  e.name = j.at("name").get<std::string>();
  if (j.contains("experience_years")) {
    if (!j.at("experience_years").is_number_integer() || j.at("experience_years").get<int>() < 0) {
      throw Error(ErrorCode::ValidationError, "expert.experience_years must be a nonnegative integer");
    }
    e.experience_years = j.at("experience_years").get<int>();
  }
  if (j.contains("degree")) {
    if (!j.at("degree").is_string()) throw Error(ErrorCode::ValidationError, "expert.degree must be a string");
    e.degree = j.at("degree").get<std::string>();
  }
  return e;
}

json expert_to_json(const ExpertInfo& e) {
  return json{{"name", e.name}, {"experience_years", e.experience_years}, {"degree", e.degree}};
}

Questionnaire questionnaire_from_json(const json& doc) {
  Questionnaire q;
  try {
    q.expert = expert_from_json(doc.at("expert"));
    for (const auto& [node, list] : doc.at("judgments").items()) {
      auto& entries = q.judgments[node];
      for (const auto& item : list) {
        const auto i = item.at("i").get<std::int64_t>();
        const auto j = item.at("j").get<std::int64_t>();
        if (i < 0 || j < 0) throw Error(ErrorCode::DimensionError, "judgment indices must be nonnegative");
        const Rational value = value_from_json(item.at("value"));
        if (value.num() <= 0) throw Error(ErrorCode::InvalidIntensity, "judgment values must be positive");
        entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), value});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed questionnaire: ") + e.what());
  }
  return q;
}

json questionnaire_to_json(const Questionnaire& q) {
  json doc;
  doc["expert"] = expert_to_json(q.expert);
  doc["judgments"] = json::object();
  for (const auto& [node, entries] : q.judgments) {
    json list = json::array();
    for (const auto& e : entries) list.push_back(json{{"i", e.i}, {"j", e.j}, {"value", e.value.str()}});
    doc["judgments"][node] = std::move(list);
  }
  return doc;
}

Questionnaire load_questionnaire(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read questionnaire '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "questionnaire '" + path + "' is not JSON: " + e.what());
  }
  return questionnaire_from_json(doc);
}

ahp::PairwiseMatrix node_matrix(const ComparisonNode& node, const std::vector<JudgmentEntry>& entries) {
  const std::size_t n = node.items.size();
  ahp::UpperJudgments upper;
  for (const auto& e : entries) {
    if (e.i >= e.j || e.j >= n) {
      throw Error(ErrorCode::DimensionError, "node '" + node.id + "': pair (" + std::to_string(e.i) + "," +
                                                 std::to_string(e.j) + ") is not an upper-triangle pair");
    }
    if (!upper.emplace(std::make_pair(e.i, e.j), e.value).second) {
      throw Error(ErrorCode::ValidationError, "node '" + node.id + "': duplicate judgment (" +
                                                  std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    }
  }
  try {
    return ahp::complete_reciprocal(upper, n, node.items);
  } catch (const IncompleteJudgments& e) {
    throw Error(ErrorCode::IncompleteJudgments, "node '" + node.id + "': " + e.what());
  }
}

ExpertResult evaluate_questionnaire(const Hierarchy& h, const Questionnaire& q) {
  const auto nodes = h.comparison_nodes();
  std::set<std::string> known;
  for (const auto& node : nodes) known.insert(node.id);
  for (const auto& [node_id, entries] : q.judgments) {
    if (!known.contains(node_id)) {
      throw Error(ErrorCode::ValidationError, "questionnaire of '" + q.expert.name + "' names unknown node '" + node_id + "'");
    }
  }
  ExpertResult out{q.expert, {}};
  static const std::vector<JudgmentEntry> kNone;
  for (const auto& node : nodes) {
    const auto it = q.judgments.find(node.id);
    const auto matrix = node_matrix(node, it == q.judgments.end() ? kNone : it->second);
    out.nodes.push_back({node.id, ahp::derive_weights(matrix), ahp::consistency(matrix)});
  }
  return out;
}

AhpResult run_ahp(const Hierarchy& h, std::span<const Questionnaire> questionnaires) {
  if (questionnaires.empty()) throw Error(ErrorCode::EmptyInput, "no questionnaires");
  AhpResult result;
  for (const auto& q : questionnaires) result.experts.push_back(evaluate_questionnaire(h, q));
  const auto nodes = h.comparison_nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::vector<ahp::WeightVector> vectors;
    for (const auto& e : result.experts) vectors.push_back(e.nodes[k].weights);
    result.averaged.emplace(nodes[k].id, ahp::aggregate_experts(vectors));
  }
  result.global = ahp::global_weights(h, result.averaged);
  return result;
}

ahp::LocalWeights local_weights_from_json(const Hierarchy& h, const json& doc) {
  const json& averaged = doc.contains("averaged") ? doc.at("averaged") : doc;
  if (!averaged.contains("main")) throw Error(ErrorCode::IncompleteWeights, "weights document lacks 'main'");
  const json& main = averaged.at("main");
  ahp::LocalWeights out;
  try {
    std::vector<std::string> ids;
    std::vector<double> values;
    for (const auto& m : h.main_criteria) {
      if (!main.contains(m.id)) throw Error(ErrorCode::IncompleteWeights, "no main weight for '" + m.id + "'");
      ids.push_back(m.id);
      values.push_back(main.at(m.id).get<double>());
    }
    out.emplace(std::string(kGoalNodeId), ahp::WeightVector::normalized(ids, values));
    for (const auto& m : h.main_criteria) {
      if (m.is_leaf()) continue;
      if (!averaged.contains("local") || !averaged.at("local").contains(m.id)) {
        throw Error(ErrorCode::IncompleteWeights, "no local weights for node '" + m.id + "'");
      }
      const json& node = averaged.at("local").at(m.id);
      ids.clear();
      values.clear();
      for (const auto& c : m.children) {
        if (!node.contains(c.id)) throw Error(ErrorCode::IncompleteWeights, "no local weight for '" + c.id + "'");
        ids.push_back(c.id);
        values.push_back(node.at(c.id).get<double>());
      }
      out.emplace(m.id, ahp::WeightVector::normalized(ids, values));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed weights document: ") + e.what());
  }
  return out;
}

ahp::LocalWeights load_local_weights(const Hierarchy& h, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read weights file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "weights file '" + path + "' is not JSON: " + e.what());
  }
  return local_weights_from_json(h, doc);
}

namespace {

json vector_json(const ahp::WeightVector& w) {
  json j = json::object();
  for (std::size_t k = 0; k < w.size(); ++k) j[w.item_ids()[k]] = canonical(w[k]);
  return j;
}

}  // namespace

json consistency_json(const std::string& expert, const NodeResult& node) {
  const auto& c = node.consistency;
  return json{{"expert", expert},
              {"node_id", node.node_id},
              {"lambda_max", canonical(c.lambda_max)},
              {"ci", canonical(c.ci)},
              {"ri", canonical(c.ri)},
              {"cr", canonical(c.cr)},
              {"verdict", std::string(ahp::to_string(c.verdict))}};
}

json weights_json(const Hierarchy& h, const AhpResult& result) {
  json doc;
  doc["per_expert"] = json::object();
  doc["consistency"] = json::array();
  std::map<std::string, int> seen;
  for (const auto& e : result.experts) {
    std::string key = e.expert.name;
    if (const int n = ++seen[key]; n > 1) key += "#" + std::to_string(n);
    json nodes = json::object();
    for (const auto& node : e.nodes) {
      nodes[node.node_id] = vector_json(node.weights);
      doc["consistency"].push_back(consistency_json(key, node));
    }
    doc["per_expert"][key] = std::move(nodes);
  }
  json averaged;
  averaged["main"] = vector_json(result.averaged.at(std::string(kGoalNodeId)));
  averaged["local"] = json::object();
  for (const auto& m : h.main_criteria) {
    if (!m.is_leaf()) averaged["local"][m.id] = vector_json(result.averaged.at(m.id));
  }
  averaged["global"] = json::object();
  for (const auto& [id, w] : result.global) averaged["global"][id] = canonical(w);
  doc["averaged"] = std::move(averaged);
  return doc;
}

}  // namespace riskmcdm
