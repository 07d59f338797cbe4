#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskmcdm/rational.hpp"

namespace riskmcdm {

enum class Direction { Benefit, Cost };

// "benefit"/"max" and "cost"/"min" are accepted.
Direction parse_direction(std::string_view text);
std::string_view to_string(Direction d);
// Direction as written in directions.json ("max" / "min").
std::string_view to_minmax(Direction d);

struct CriterionNode {
  std::string id;
  std::string label;
  std::vector<CriterionNode> children;
  std::optional<Direction> direction;  // leaves only
  std::optional<std::string> ratio_ref;

  bool is_leaf() const noexcept { return children.empty(); }
};

// One pairwise-comparison matrix worth of items: the goal node compares the
// main criteria, each non-leaf main criterion compares its children.
struct ComparisonNode {
  std::string id;
  std::vector<std::string> items;
};

inline constexpr std::string_view kGoalNodeId = "goal";

struct Hierarchy {
  std::string goal_label;
  std::vector<CriterionNode> main_criteria;
  std::vector<std::string> alternatives;

  // Leaves in depth-first order; a main criterion without children is a leaf.
  std::vector<const CriterionNode*> leaves() const;
  std::vector<std::string> leaf_ids() const;
  std::vector<ComparisonNode> comparison_nodes() const;
  const CriterionNode* find(std::string_view id) const;
};

struct Violation {
  std::string kind;     // "duplicate id", "missing direction", ...
  std::string subject;  // offending id, or empty
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_hierarchy(const Hierarchy& h);

// Throws Error{ValidationError} listing every violation.
void require_valid(const Hierarchy& h);

// The 34 financial-ratio criterion symbols in canonical order
// (CSR1..CSR11, LR1..LR3, IR1..IR6, CFR1..CFR14).
std::span<const std::string_view> standard_symbols();
bool is_standard_symbol(std::string_view id);
// Position in canonical order, used as a deterministic tiebreak.
std::optional<std::size_t> canonical_index(std::string_view id);

// A judgment in "favored >= 1" form.
struct SaatyJudgment {
  enum class Favored { First, Second };

  Rational intensity{1, 1};
  Favored favored = Favored::First;

  // Value stored in matrix cell (first, second).
  Rational cell_value() const;
  static SaatyJudgment from_cell_value(const Rational& value);
};

Rational saaty_intensity(int code, bool reciprocal);
// True for 1..9 and 1/2..1/9.
bool is_saaty_value(const Rational& value);

Hierarchy hierarchy_from_json(const nlohmann::json& doc);
nlohmann::json hierarchy_to_json(const Hierarchy& h);
Hierarchy load_hierarchy(const std::string& path);

// Bundled model: goal, four main risk groups, 34 ratio leaves, years 2008..2017.
const Hierarchy& bundled_hierarchy();
std::string_view bundled_hierarchy_json();

}  // namespace riskmcdm
