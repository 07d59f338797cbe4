#include "riskmcdm/ratios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "riskmcdm/error.hpp"

namespace riskmcdm::ratios {

namespace {

struct ItemInfo {
  LineItem item;
  std::string_view name;
  Statement statement;
};

constexpr std::array<ItemInfo, kLineItemCount> kItems = {{
    {LineItem::TotalDebt, "total_debt", Statement::Balance},
    {LineItem::ShortTermDebt, "short_term_debt", Statement::Balance},
    {LineItem::LongTermDebt, "long_term_debt", Statement::Balance},
    {LineItem::Equity, "equity", Statement::Balance},
    {LineItem::RetainedEarnings, "retained_earnings", Statement::Balance},
    {LineItem::TotalAssets, "total_assets", Statement::Balance},
    {LineItem::NetFixedAssets, "net_fixed_assets", Statement::Balance},
    {LineItem::FixedAssets, "fixed_assets", Statement::Balance},
    {LineItem::InvestedFunds, "invested_funds", Statement::Balance},
    {LineItem::CurrentAssets, "current_assets", Statement::Balance},
    {LineItem::Inventory, "inventory", Statement::Balance},
    {LineItem::CashAndEquivalents, "cash_and_equivalents", Statement::Balance},
    {LineItem::CurrentLiabilities, "current_liabilities", Statement::Balance},
    {LineItem::Sales, "sales", Statement::Income},
    {LineItem::GrossProfit, "gross_profit", Statement::Income},
    {LineItem::NetProfit, "net_profit", Statement::Income},
    {LineItem::NetProfitBeforeInterest, "net_profit_before_interest", Statement::Income},
    {LineItem::Ebit, "ebit", Statement::Income},
    {LineItem::InterestExpense, "interest_expense", Statement::Income},
    {LineItem::NetProfitAfterInterestTax, "net_profit_after_interest_tax", Statement::Income},
    {LineItem::OperatingNet, "operating_net", Statement::Cashflow},
    {LineItem::InvestingNet, "investing_net", Statement::Cashflow},
    {LineItem::FinancingNet, "financing_net", Statement::Cashflow},
    {LineItem::CapitalExpenditures, "capital_expenditures", Statement::Cashflow},
    {LineItem::OperatingInflows, "operating_inflows", Statement::Cashflow},
    {LineItem::InitialCashRequirements, "initial_cash_requirements", Statement::Cashflow},
    {LineItem::CashDistributions, "cash_distributions", Statement::Cashflow},
}};

constexpr std::string_view statement_key(Statement s) {
  switch (s) {
    case Statement::Balance: return "balance";
    case Statement::Income: return "income";
    case Statement::Cashflow: return "cashflow";
  }
  return "";
}

Term t(LineItem item) { return {1.0, item, false}; }
Term neg(LineItem item) { return {-1.0, item, false}; }
Term abs_of(LineItem item) { return {1.0, item, true}; }

RatioDefinition simple(std::string id, LineItem num, LineItem den, Direction dir) {
  return {std::move(id), {t(num)}, {t(den)}, dir};
}

std::vector<RatioDefinition> make_definitions() {
  using L = LineItem;
  constexpr auto B = Direction::Benefit;
  constexpr auto C = Direction::Cost;
  std::vector<RatioDefinition> d;
  d.push_back(simple("CSR1", L::TotalDebt, L::Equity, C));
  d.push_back(simple("CSR2", L::ShortTermDebt, L::Equity, C));
  d.push_back(simple("CSR3", L::LongTermDebt, L::Equity, C));
  d.push_back(simple("CSR4", L::RetainedEarnings, L::TotalAssets, B));
  d.push_back(simple("CSR5", L::LongTermDebt, L::TotalAssets, C));
  d.push_back(simple("CSR6", L::TotalDebt, L::TotalAssets, C));
  d.push_back(simple("CSR7", L::LongTermDebt, L::TotalDebt, C));
  d.push_back(simple("CSR8", L::Equity, L::NetFixedAssets, B));
  d.push_back(simple("CSR9", L::InvestedFunds, L::NetFixedAssets, B));
  d.push_back(simple("CSR10", L::TotalAssets, L::Equity, B));
  // net working capital = current assets - current liabilities
  d.push_back({"CSR11", {t(L::CurrentAssets), neg(L::CurrentLiabilities)}, {t(L::Equity)}, B});
  d.push_back(simple("LR1", L::CurrentAssets, L::CurrentLiabilities, B));
  d.push_back({"LR2", {t(L::CurrentAssets), neg(L::Inventory)}, {t(L::CurrentLiabilities)}, B});
  d.push_back(simple("LR3", L::CashAndEquivalents, L::CurrentLiabilities, B));
  d.push_back(simple("IR1", L::NetProfitBeforeInterest, L::NetProfit, C));
  d.push_back(simple("IR2", L::GrossProfit, L::Sales, B));
  d.push_back(simple("IR3", L::NetProfit, L::Sales, B));
  d.push_back(simple("IR4", L::NetProfitAfterInterestTax, L::Sales, B));
  d.push_back({"IR5", {t(L::NetProfit), t(L::InterestExpense)}, {t(L::TotalAssets)}, C});
  d.push_back(simple("IR6", L::NetProfit, L::Equity, C));
  // Investing and financing flows enter by magnitude.
  d.push_back({"CFR1", {t(L::OperatingNet)}, {abs_of(L::InvestingNet), abs_of(L::FinancingNet)}, B});
  d.push_back(simple("CFR2", L::OperatingNet, L::Sales, B));
  d.push_back(simple("CFR3", L::OperatingNet, L::CapitalExpenditures, B));
  d.push_back(simple("CFR4", L::OperatingNet, L::CurrentLiabilities, B));
  d.push_back(simple("CFR5", L::OperatingNet, L::NetProfit, B));
  d.push_back(simple("CFR6", L::OperatingNet, L::TotalAssets, B));
  d.push_back(simple("CFR7", L::OperatingNet, L::Equity, B));
  d.push_back(simple("CFR8", L::OperatingNet, L::LongTermDebt, B));
  d.push_back(simple("CFR9", L::OperatingInflows, L::InitialCashRequirements, B));
  d.push_back(simple("CFR10", L::OperatingNet, L::FixedAssets, B));
  d.push_back(simple("CFR11", L::OperatingNet, L::TotalDebt, B));
  d.push_back(simple("CFR12", L::OperatingNet, L::CashDistributions, B));
  d.push_back({"CFR13", {t(L::OperatingNet)}, {abs_of(L::InvestingNet)}, B});
  d.push_back({"CFR14", {t(L::OperatingNet)}, {abs_of(L::FinancingNet)}, B});
  return d;
}

}  // namespace

std::string_view name_of(LineItem item) { return kItems[static_cast<std::size_t>(item)].name; }

Statement statement_of(LineItem item) { return kItems[static_cast<std::size_t>(item)].statement; }

std::optional<LineItem> parse_line_item(std::string_view name) {
  for (const auto& info : kItems) {
    if (info.name == name) return info.item;
  }
  return std::nullopt;
}

double StatementYear::get(LineItem item) const {
  const auto& v = items[static_cast<std::size_t>(item)];
  if (!v) {
    throw Error(ErrorCode::MissingLineItem, "year " + year + " lacks line item '" + std::string(name_of(item)) + "'");
  }
  return *v;
}

std::vector<std::string> StatementYear::violations() const {
  std::vector<std::string> out;
  const auto opt = [&](LineItem item) { return items[static_cast<std::size_t>(item)]; };
  if (const auto ta = opt(LineItem::TotalAssets); ta && *ta < 0.0) out.push_back("total_assets is negative");
  const auto ca = opt(LineItem::CurrentAssets);
  const auto inv = opt(LineItem::Inventory);
  const auto cash = opt(LineItem::CashAndEquivalents);
  if (inv && *inv < 0.0) out.push_back("inventory is negative");
  if (ca && inv && *ca < *inv) out.push_back("current_assets below inventory");
  if (ca && cash && *cash > *ca) out.push_back("cash_and_equivalents exceeds current_assets");
  return out;
}

double evaluate(const Expression& e, const StatementYear& y) {
  double total = 0.0;
  for (const auto& term : e) {
    const double v = y.get(term.item);
    total += term.sign * (term.absolute ? std::abs(v) : v);
  }
  return total;
}

std::optional<double> compute_ratio(const RatioDefinition& def, const StatementYear& y) {
  const double num = evaluate(def.numerator, y);
  const double den = evaluate(def.denominator, y);
  if (den == 0.0) return std::nullopt;
  const double r = num / den;
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

std::span<const RatioDefinition> standard_definitions() {
  static const std::vector<RatioDefinition> defs = make_definitions();
  return defs;
}

const RatioDefinition& definition_of(std::string_view id) {
  for (const auto& d : standard_definitions()) {
    if (d.id == id) return d;
  }
  throw Error(ErrorCode::UnknownCriterion, "unknown criterion '" + std::string(id) + "'");
}

Direction direction_of(std::string_view id) { return definition_of(id).direction; }

ImputationPolicy parse_imputation(std::string_view text) {
  if (text == "worst-observed") return ImputationPolicy::WorstObserved;
  if (text == "zero") return ImputationPolicy::Zero;
  if (text == "fail") return ImputationPolicy::Fail;
  throw Error(ErrorCode::ValidationError, "unknown imputation policy '" + std::string(text) + "'");
}

std::string_view to_string(ImputationPolicy p) {
  switch (p) {
    case ImputationPolicy::WorstObserved: return "worst-observed";
    case ImputationPolicy::Zero: return "zero";
    case ImputationPolicy::Fail: return "fail";
  }
  return "";
}

saw::DecisionMatrix build_decision_matrix(std::span<const StatementYear> years, std::span<const RatioDefinition> defs,
                                          ImputationPolicy policy) {
  if (years.empty() || defs.empty()) throw Error(ErrorCode::EmptyInput, "need at least one year and one ratio");
  const std::size_t m = years.size();
  const std::size_t n = defs.size();
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  for (const auto& y : years) alternatives.push_back(y.year);
  for (const auto& d : defs) criteria.push_back(d.id);

  Matrix x(m, n);
  std::vector<std::vector<bool>> undefined(n, std::vector<bool>(m, false));
  for (std::size_t j = 0; j < n; ++j) {
    bool any_defined = false;
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = compute_ratio(defs[j], years[i]);
      if (r) {
        x(i, j) = *r;
        any_defined = true;
      } else {
        undefined[j][i] = true;
      }
    }
    if (!any_defined) {
      throw Error(ErrorCode::ColumnUnavailable, "ratio " + defs[j].id + " is undefined in every year");
    }
  }

  saw::DecisionMatrix out;
  out.alternative_ids = std::move(alternatives);
  out.criterion_ids = std::move(criteria);
  out.status.assign(m * n, saw::CellStatus::Observed);
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<double> worst;
    for (std::size_t i = 0; i < m; ++i) {
      if (undefined[j][i]) continue;
      const double v = x(i, j);
      if (!worst) worst = v;
      else worst = defs[j].direction == Direction::Benefit ? std::min(*worst, v) : std::max(*worst, v);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!undefined[j][i]) continue;
      if (policy == ImputationPolicy::Fail) {
        throw Error(ErrorCode::UndefinedRatio,
                    "ratio " + defs[j].id + " is undefined in year " + years[i].year + " (zero denominator)");
      }
      x(i, j) = policy == ImputationPolicy::Zero ? 0.0 : *worst;
      out.status[j * m + i] = saw::CellStatus::Imputed;
    }
  }
  out.values = std::move(x);
  out.check();
  return out;
}

std::vector<StatementYear> statements_from_json(const nlohmann::json& doc) {
  std::vector<StatementYear> out;
  try {
    for (const auto& yj : doc.at("years")) {
      StatementYear y;
      const auto& label = yj.at("year");
      y.year = label.is_string() ? label.get<std::string>() : label.dump();
      for (const auto section : {Statement::Balance, Statement::Income, Statement::Cashflow}) {
        const auto key = std::string(statement_key(section));
        if (!yj.contains(key)) continue;
        for (const auto& [name, value] : yj.at(key).items()) {
          const auto item = parse_line_item(name);
          if (!item || statement_of(*item) != section) {
            throw Error(ErrorCode::ValidationError, "unknown " + key + " line item '" + name + "'");
          }
          if (value.is_null()) continue;
          y.set(*item, value.get<double>());
        }
      }
      if (const auto bad = y.violations(); !bad.empty()) {
        throw Error(ErrorCode::ValidationError, "year " + y.year + ": " + bad.front());
      }
      out.push_back(std::move(y));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("malformed statements document: ") + e.what());
  }
  return out;
}

nlohmann::json statements_to_json(std::span<const StatementYear> years) {
  nlohmann::json doc;
  doc["years"] = nlohmann::json::array();
  for (const auto& y : years) {
    nlohmann::json yj;
    yj["year"] = y.year;
    for (const auto& info : kItems) {
      const auto& v = y.items[static_cast<std::size_t>(info.item)];
      if (v) yj[std::string(statement_key(info.statement))][std::string(info.name)] = *v;
    }
    doc["years"].push_back(std::move(yj));
  }
  return doc;
}

std::vector<StatementYear> read_statements_csv(std::istream& in) {
  std::vector<StatementYear> out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (line_no == 1 && !cells.empty() && cells[0] == "year") continue;
    if (cells.size() != 3) {
      throw Error(ErrorCode::ValidationError, "line " + std::to_string(line_no) + ": expected year,line_item,value");
    }
    const auto item = parse_line_item(cells[1]);
    if (!item) throw Error(ErrorCode::ValidationError, "line " + std::to_string(line_no) + ": unknown line item '" + cells[1] + "'");
    double value = 0.0;
    const auto* end = cells[2].data() + cells[2].size();
    if (auto [ptr, ec] = std::from_chars(cells[2].data(), end, value); ec != std::errc{} || ptr != end) {
      throw Error(ErrorCode::ValidationError, "line " + std::to_string(line_no) + ": bad value '" + cells[2] + "'");
    }
    auto [it, inserted] = index.try_emplace(cells[0], out.size());
    if (inserted) out.push_back(StatementYear{cells[0], {}});
    out[it->second].set(*item, value);
  }
  for (const auto& y : out) {
    if (const auto bad = y.violations(); !bad.empty()) {
      throw Error(ErrorCode::ValidationError, "year " + y.year + ": " + bad.front());
    }
  }
  return out;
}

std::vector<StatementYear> load_statements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read statements file '" + path + "'");
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return read_statements_csv(in);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, "statements file '" + path + "' is not JSON: " + e.what());
  }
  return statements_from_json(doc);
}

}  // namespace riskmcdm::ratios
