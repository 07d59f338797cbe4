#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/saw.hpp"

namespace riskmcdm::ratios {

enum class LineItem {
  // balance sheet
  TotalDebt,
  ShortTermDebt,
  LongTermDebt,
  Equity,
  RetainedEarnings,
  TotalAssets,
  NetFixedAssets,
  FixedAssets,
  InvestedFunds,
  CurrentAssets,
  Inventory,
  CashAndEquivalents,
  CurrentLiabilities,
  // income statement
  Sales,
  GrossProfit,
  NetProfit,
  NetProfitBeforeInterest,
  Ebit,
  InterestExpense,
  NetProfitAfterInterestTax,
  // cash flow statement
  OperatingNet,
  InvestingNet,
  FinancingNet,
  CapitalExpenditures,
  OperatingInflows,
  InitialCashRequirements,
  CashDistributions,
};

inline constexpr std::size_t kLineItemCount = 27;

enum class Statement { Balance, Income, Cashflow };

std::string_view name_of(LineItem item);
Statement statement_of(LineItem item);
std::optional<LineItem> parse_line_item(std::string_view name);

struct StatementYear {
  std::string year;
  std::array<std::optional<double>, kLineItemCount> items{};

  bool has(LineItem item) const { return items[static_cast<std::size_t>(item)].has_value(); }
  // Throws Error{MissingLineItem}.
  double get(LineItem item) const;
  void set(LineItem item, double value) { items[static_cast<std::size_t>(item)] = value; }

  // Violations of the statement invariants among the items present.
  std::vector<std::string> violations() const;
};

struct Term {
  double sign = 1.0;
  LineItem item;
  bool absolute = false;
};

using Expression = std::vector<Term>;

struct RatioDefinition {
  std::string id;
  Expression numerator;
  Expression denominator;
  Direction direction;
};

double evaluate(const Expression& e, const StatementYear& y);

// nullopt when the denominator is zero (the ratio is undefined that year).
std::optional<double> compute_ratio(const RatioDefinition& def, const StatementYear& y);

// The 34 criterion ratios in canonical symbol order.
std::span<const RatioDefinition> standard_definitions();
const RatioDefinition& definition_of(std::string_view id);

// Throws Error{UnknownCriterion}.
Direction direction_of(std::string_view id);

enum class ImputationPolicy { WorstObserved, Zero, Fail };
ImputationPolicy parse_imputation(std::string_view text);
std::string_view to_string(ImputationPolicy p);

saw::DecisionMatrix build_decision_matrix(std::span<const StatementYear> years,
                                          std::span<const RatioDefinition> defs,
                                          ImputationPolicy policy = ImputationPolicy::WorstObserved);

// statements.json: {years: [{year, balance: {...}, income: {...}, cashflow: {...}}]}
std::vector<StatementYear> statements_from_json(const nlohmann::json& doc);
nlohmann::json statements_to_json(std::span<const StatementYear> years);
// Long CSV: year,line_item,value
std::vector<StatementYear> read_statements_csv(std::istream& in);
// Picks the reader from the extension (.csv, otherwise JSON).
std::vector<StatementYear> load_statements(const std::string& path);

}  // namespace riskmcdm::ratios
