#include "riskmcdm/hierarchy.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "riskmcdm/error.hpp"
#include "bundled_hierarchy_data.hpp"

namespace riskmcdm {

using nlohmann::json;

Direction parse_direction(std::string_view text) {
  if (text == "benefit" || text == "max") return Direction::Benefit;
  if (text == "cost" || text == "min") return Direction::Cost;
  throw Error(ErrorCode::ValidationError, "unknown direction '" + std::string(text) + "'");
}

std::string_view to_string(Direction d) { return d == Direction::Benefit ? "benefit" : "cost"; }

std::string_view to_minmax(Direction d) { return d == Direction::Benefit ? "max" : "min"; }

namespace {

constexpr std::array<std::string_view, 34> kSymbols = {
    "CSR1",  "CSR2",  "CSR3",  "CSR4",  "CSR5",  "CSR6",  "CSR7",  "CSR8",  "CSR9",
    "CSR10", "CSR11", "LR1",   "LR2",   "LR3",   "IR1",   "IR2",   "IR3",   "IR4",
    "IR5",   "IR6",   "CFR1",  "CFR2",  "CFR3",  "CFR4",  "CFR5",  "CFR6",  "CFR7",
    "CFR8",  "CFR9",  "CFR10", "CFR11", "CFR12", "CFR13", "CFR14"};

void collect_leaves(const CriterionNode& node, std::vector<const CriterionNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

const CriterionNode* find_in(const std::vector<CriterionNode>& nodes, std::string_view id) {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
    if (const auto* hit = find_in(n.children, id)) return hit;
  }
  return nullptr;
}

struct Validator {
  ValidationReport report;
  std::map<std::string, int> seen;

  void add(std::string kind, std::string subject, std::string message) {
    report.push_back({std::move(kind), std::move(subject), std::move(message)});
  }

  void visit(const CriterionNode& node, int level) {
    if (node.id.empty()) add("empty id", "", "criterion with empty id");
    if (++seen[node.id] == 2) add("duplicate id", node.id, "criterion id '" + node.id + "' appears more than once");
    if (level > 2) {
      add("too deep", node.id, "criterion '" + node.id + "' is below the sub-criterion level");
    }
    if (node.is_leaf()) {
      if (!node.direction) add("missing direction", node.id, "leaf '" + node.id + "' has no direction");
    } else if (node.direction) {
      add("direction on inner node", node.id, "non-leaf '" + node.id + "' carries a direction");
    }
    if (node.ratio_ref) {
      if (!is_standard_symbol(*node.ratio_ref)) {
        add("unknown ratio", node.id, "ratio reference '" + *node.ratio_ref + "' is not a known ratio");
      }
      if (!is_standard_symbol(node.id)) {
        add("nonstandard symbol", node.id, "criterion '" + node.id + "' binds a ratio but is not a standard symbol");
      }
    }
    for (const auto& child : node.children) visit(child, level + 1);
  }
};

}  // namespace

std::vector<const CriterionNode*> Hierarchy::leaves() const {
  std::vector<const CriterionNode*> out;
  for (const auto& m : main_criteria) collect_leaves(m, out);
  return out;
}

std::vector<std::string> Hierarchy::leaf_ids() const {
  std::vector<std::string> out;
  for (const auto* leaf : leaves()) out.push_back(leaf->id);
  return out;
}

std::vector<ComparisonNode> Hierarchy::comparison_nodes() const {
  std::vector<ComparisonNode> out;
  ComparisonNode goal{std::string(kGoalNodeId), {}};
  for (const auto& m : main_criteria) goal.items.push_back(m.id);
  out.push_back(std::move(goal));
  for (const auto& m : main_criteria) {
    if (m.is_leaf()) continue;
    ComparisonNode node{m.id, {}};
    for (const auto& c : m.children) node.items.push_back(c.id);
    out.push_back(std::move(node));
  }
  return out;
}

const CriterionNode* Hierarchy::find(std::string_view id) const { return find_in(main_criteria, id); }

ValidationReport validate_hierarchy(const Hierarchy& h) {
  Validator v;
  if (h.main_criteria.empty()) v.add("no criteria", "", "hierarchy has no main criteria");
  for (const auto& m : h.main_criteria) {
    if (m.id == kGoalNodeId) v.add("reserved id", m.id, "'goal' is reserved for the goal node");
    v.visit(m, 1);
  }
  if (h.alternatives.empty()) v.add("no alternatives", "", "hierarchy has no alternatives");
  std::set<std::string> alts;
  for (const auto& a : h.alternatives) {
    if (!alts.insert(a).second) v.add("duplicate alternative", a, "alternative '" + a + "' appears more than once");
  }
  return v.report;
}

void require_valid(const Hierarchy& h) {
  const auto report = validate_hierarchy(h);
  if (report.empty()) return;
  std::string msg = "invalid hierarchy:";
  for (const auto& violation : report) msg += "\n  " + violation.kind + ": " + violation.message;
  throw Error(ErrorCode::ValidationError, msg);
}

std::span<const std::string_view> standard_symbols() { return kSymbols; }

bool is_standard_symbol(std::string_view id) { return canonical_index(id).has_value(); }

std::optional<std::size_t> canonical_index(std::string_view id) {
  const auto it = std::find(kSymbols.begin(), kSymbols.end(), id);
  if (it == kSymbols.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kSymbols.begin());
}

Rational SaatyJudgment::cell_value() const {
  return favored == Favored::First ? intensity : intensity.reciprocal();
}

SaatyJudgment SaatyJudgment::from_cell_value(const Rational& value) {
  if (value.num() <= 0) throw Error(ErrorCode::InvalidIntensity, "judgment must be positive");
  if (value.num() >= value.den()) return {value, Favored::First};
  return {value.reciprocal(), Favored::Second};
}

Rational saaty_intensity(int code, bool reciprocal) {
  if (code < 1 || code > 9) {
    throw Error(ErrorCode::InvalidIntensity, "intensity code " + std::to_string(code) + " outside 1..9");
  }
  return reciprocal ? Rational(1, code) : Rational(code, 1);
}

bool is_saaty_value(const Rational& value) {
  if (value.num() == 1 && value.den() >= 1 && value.den() <= 9) return true;
  return value.den() == 1 && value.num() >= 1 && value.num() <= 9;
}

namespace {

CriterionNode node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("id") || !j.at("id").is_string()) {
    throw Error(ErrorCode::ValidationError, "criterion entries need a string 'id'");
  }
  CriterionNode node;
  node.id = j.at("id").get<std::string>();
  node.label = j.value("label", node.id);
  if (j.contains("direction") && !j.at("direction").is_null()) {
    node.direction = parse_direction(j.at("direction").get<std::string>());
  }
  if (j.contains("ratio") && !j.at("ratio").is_null()) node.ratio_ref = j.at("ratio").get<std::string>();
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) node.children.push_back(node_from_json(c));
  }
  return node;
}

json node_to_json(const CriterionNode& node) {
  json j;
  j["id"] = node.id;
  j["label"] = node.label;
  if (node.direction) j["direction"] = std::string(to_string(*node.direction));
  if (node.ratio_ref) j["ratio"] = *node.ratio_ref;
  if (!node.children.empty()) {
    j["children"] = json::array();
    for (const auto& c : node.children) j["children"].push_back(node_to_json(c));
  }
  return j;
}

}  // namespace

Hierarchy hierarchy_from_json(const json& doc) {
  try {
    Hierarchy h;
    h.goal_label = doc.at("goal").get<std::string>();
    for (const auto& c : doc.at("criteria")) h.main_criteria.push_back(node_from_json(c));
    h.alternatives = doc.at("alternatives").get<std::vector<std::string>>();
    return h;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed hierarchy document: ") + e.what());
  }
}

json hierarchy_to_json(const Hierarchy& h) {
  json j;
  j["goal"] = h.goal_label;
  j["criteria"] = json::array();
  for (const auto& m : h.main_criteria) j["criteria"].push_back(node_to_json(m));
  j["alternatives"] = h.alternatives;
  return j;
}

Hierarchy load_hierarchy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read hierarchy file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, "hierarchy file '" + path + "' is not JSON: " + e.what());
  }
  return hierarchy_from_json(doc);
}

std::string_view bundled_hierarchy_json() { return embedded::kBundledHierarchyJson; }

const Hierarchy& bundled_hierarchy() {
  static const Hierarchy h = hierarchy_from_json(json::parse(bundled_hierarchy_json()));
  return h;
}

}  // namespace riskmcdm
