#include "riskmcdm/saw.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "riskmcdm/error.hpp"
#include "riskmcdm/kernels.hpp"

namespace riskmcdm::saw {

DecisionMatrix::DecisionMatrix(std::vector<std::string> alternatives, std::vector<std::string> criteria, Matrix x)
    : alternative_ids(std::move(alternatives)),
      criterion_ids(std::move(criteria)),
      values(std::move(x)),
      status(alternative_ids.size() * criterion_ids.size(), CellStatus::Observed) {
  check();
}

void DecisionMatrix::check() const {
  if (values.rows() != alternative_ids.size() || values.cols() != criterion_ids.size()) {
    throw Error(ErrorCode::DimensionError, "decision matrix shape does not match its id lists");
  }
  if (status.size() != values.rows() * values.cols()) {
    throw Error(ErrorCode::DimensionError, "cell status grid does not match matrix shape");
  }
  for (std::size_t j = 0; j < values.cols(); ++j) {
    for (std::size_t i = 0; i < values.rows(); ++i) {
      if (cell_status(i, j) == CellStatus::Observed && std::isnan(values(i, j))) {
        throw Error(ErrorCode::ValidationError,
                    "NaN in observed cell (" + alternative_ids[i] + ", " + criterion_ids[j] + ")");
      }
    }
  }
}

Direction DirectionVector::of(std::string_view id) const {
  for (std::size_t k = 0; k < criterion_ids.size(); ++k) {
    if (criterion_ids[k] == id) return directions[k];
  }
  throw Error(ErrorCode::UnknownCriterion, "no direction for criterion '" + std::string(id) + "'");
}

DirectionVector DirectionVector::from_hierarchy(const Hierarchy& h) {
  DirectionVector out;
  for (const auto* leaf : h.leaves()) {
    if (!leaf->direction) throw Error(ErrorCode::ValidationError, "leaf '" + leaf->id + "' has no direction");
    out.criterion_ids.push_back(leaf->id);
    out.directions.push_back(*leaf->direction);
  }
  return out;
}

Normalization parse_normalization(std::string_view text) {
  if (text == "max-min") return Normalization::MaxMin;
  if (text == "ratio-to-max") return Normalization::RatioToMax;
  throw Error(ErrorCode::ValidationError, "unknown normalization '" + std::string(text) + "'");
}

std::string_view to_string(Normalization n) { return n == Normalization::MaxMin ? "max-min" : "ratio-to-max"; }

std::size_t ScoreTable::index_of_rank(int r) const {
  const auto it = std::find(ranks.begin(), ranks.end(), r);
  if (it == ranks.end()) throw Error(ErrorCode::DimensionError, "rank out of range");
  return static_cast<std::size_t>(it - ranks.begin());
}

NormalizedMatrix normalize(const DecisionMatrix& d, const DirectionVector& dirs, Normalization scheme) {
  if (d.values.empty()) throw Error(ErrorCode::EmptyInput, "decision matrix is empty");
  d.check();
  const std::size_t m = d.values.rows();
  const std::size_t n = d.values.cols();
  NormalizedMatrix out{d.alternative_ids, d.criterion_ids, Matrix(m, n), std::vector<double>(n),
                       std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const Direction dir = dirs.of(d.criterion_ids[j]);
    const auto col = d.values.column(j);
    auto dst = out.r.column(j);
    const auto [lo, hi] = kernels::minmax(col);
    out.col_min[j] = lo;
    out.col_max[j] = hi;
    if (scheme == Normalization::MaxMin) {
      if (hi == lo) {
        std::fill(dst.begin(), dst.end(), 1.0);
      } else if (dir == Direction::Benefit) {
        kernels::sub_div(col, lo, hi - lo, dst);
      } else {
        kernels::rsub_div(col, hi, hi - lo, dst);
      }
    } else if (dir == Direction::Benefit) {
      if (hi == 0.0) throw Error(ErrorCode::DimensionError, "ratio-to-max needs a nonzero column maximum");
      kernels::sub_div(col, 0.0, hi, dst);
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        if (col[i] == 0.0) throw Error(ErrorCode::DimensionError, "ratio-to-max cost column contains zero");
        dst[i] = lo / col[i];
      }
    }
  }
  return out;
}

WeightedMatrix apply_weights(const NormalizedMatrix& r, const CriterionWeights& w) {
  WeightedMatrix out{r.alternative_ids, r.criterion_ids, Matrix(r.r.rows(), r.r.cols())};
  for (std::size_t j = 0; j < r.criterion_ids.size(); ++j) {
    const auto it = w.find(r.criterion_ids[j]);
    if (it == w.end()) throw Error(ErrorCode::IncompleteWeights, "no weight for criterion '" + r.criterion_ids[j] + "'");
    if (!(it->second >= 0.0)) throw Error(ErrorCode::ValidationError, "criterion weights must be nonnegative");
    kernels::scale(it->second, r.r.column(j), out.v.column(j));
  }
  return out;
}

std::vector<double> score(const WeightedMatrix& v) {
  std::vector<double> totals(v.v.rows(), 0.0);
  for (std::size_t j = 0; j < v.v.cols(); ++j) kernels::axpy(1.0, v.v.column(j), totals);
  return totals;
}

ScoreTable rank(const std::vector<double>& scores, std::vector<std::string> alternative_ids) {
  const std::size_t m = scores.size();
  if (m == 0) throw Error(ErrorCode::EmptyInput, "no scores to rank");
  if (alternative_ids.empty()) {
    for (std::size_t i = 0; i < m; ++i) alternative_ids.push_back(std::to_string(i + 1));
  }
  if (alternative_ids.size() != m) throw Error(ErrorCode::DimensionError, "alternative ids do not match score count");
  double total = 0.0;
  for (double v : scores) total += v;
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateScores, "scores sum to zero");

  ScoreTable t{std::move(alternative_ids), scores, std::vector<double>(m), std::vector<int>(m)};
  for (std::size_t i = 0; i < m; ++i) t.shares[i] = scores[i] / total;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  for (std::size_t pos = 0; pos < m; ++pos) t.ranks[order[pos]] = static_cast<int>(pos + 1);
  return t;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ValidationError, "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
  }
  return v;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DecisionMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.size() < 2) throw Error(ErrorCode::EmptyInput, "matrix CSV has no criterion columns");
  std::vector<std::string> criteria(header.begin() + 1, header.end());
  std::vector<std::string> alternatives;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::DimensionError, "line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(header.size()) + " cells");
    }
    alternatives.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) row.push_back(parse_cell(cells[k], line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "matrix CSV has no rows");
  Matrix x(rows.size(), criteria.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < criteria.size(); ++j) x(i, j) = rows[i][j];
  }
  return DecisionMatrix(std::move(alternatives), std::move(criteria), std::move(x));
}

DecisionMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read matrix file '" + path + "'");
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& alternative_ids,
                      const std::vector<std::string>& criterion_ids, const Matrix& values) {
  out << "alternative";
  for (const auto& c : criterion_ids) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < alternative_ids.size(); ++i) {
    out << alternative_ids[i];
    for (std::size_t j = 0; j < criterion_ids.size(); ++j) out << ',' << shortest(values(i, j));
    out << '\n';
  }
}

DirectionVector read_directions(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("directions file is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ValidationError, "directions file must be a JSON object");
  DirectionVector out;
  for (const auto& [id, dir] : doc.items()) {
    if (!dir.is_string()) throw Error(ErrorCode::ValidationError, "direction for '" + id + "' must be a string");
    out.criterion_ids.push_back(id);
    out.directions.push_back(parse_direction(dir.get<std::string>()));
  }
  return out;
}

DirectionVector read_directions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read directions file '" + path + "'");
  return read_directions(in);
}

std::string directions_json(const DirectionVector& dirs) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < dirs.criterion_ids.size(); ++k) {
    doc[dirs.criterion_ids[k]] = std::string(to_minmax(dirs.directions[k]));
  }
  return doc.dump(2) + "\n";
}

}  // namespace riskmcdm::saw
