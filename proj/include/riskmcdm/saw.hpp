#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/matrix.hpp"

namespace riskmcdm::saw {

enum class CellStatus { Observed, Imputed };

// Alternatives x criteria.
struct DecisionMatrix {
  std::vector<std::string> alternative_ids;
  std::vector<std::string> criterion_ids;
  Matrix values;
  std::vector<CellStatus> status;  // column-major like `values`

  DecisionMatrix() = default;
  DecisionMatrix(std::vector<std::string> alternatives, std::vector<std::string> criteria, Matrix x);

  CellStatus cell_status(std::size_t alt, std::size_t crit) const {
    return status[crit * alternative_ids.size() + alt];
  }
  void set_status(std::size_t alt, std::size_t crit, CellStatus s) {
    status[crit * alternative_ids.size() + alt] = s;
  }
  // Throws DimensionError / ValidationError on shape mismatch or NaN in an
  // observed cell.
  void check() const;
};

struct DirectionVector {
  std::vector<std::string> criterion_ids;
  std::vector<Direction> directions;

  // Throws UnknownCriterion.
  Direction of(std::string_view id) const;
  static DirectionVector from_hierarchy(const Hierarchy& h);
};

enum class Normalization { MaxMin, RatioToMax };
Normalization parse_normalization(std::string_view text);
std::string_view to_string(Normalization n);

struct NormalizedMatrix {
  std::vector<std::string> alternative_ids;
  std::vector<std::string> criterion_ids;
  Matrix r;
  std::vector<double> col_max;
  std::vector<double> col_min;
};

struct WeightedMatrix {
  std::vector<std::string> alternative_ids;
  std::vector<std::string> criterion_ids;
  Matrix v;
};

struct ScoreTable {
  std::vector<std::string> alternative_ids;
  std::vector<double> scores;  // V
  std::vector<double> shares;  // A
  std::vector<int> ranks;      // 1 = largest V

  // Index of the alternative holding the given rank.
  std::size_t index_of_rank(int rank) const;
};

using CriterionWeights = std::map<std::string, double, std::less<>>;

// Max-min: benefit (x - min) / (max - min), cost (max - x) / (max - min);
// a constant column maps to 1. Ratio-to-max: benefit x / max, cost min / x.
NormalizedMatrix normalize(const DecisionMatrix& d, const DirectionVector& dirs,
                           Normalization scheme = Normalization::MaxMin);

WeightedMatrix apply_weights(const NormalizedMatrix& r, const CriterionWeights& w);

std::vector<double> score(const WeightedMatrix& v);

// Ties keep input order.
ScoreTable rank(const std::vector<double>& scores, std::vector<std::string> alternative_ids = {});

// CSV: header row of criterion ids after a leading alternative column.
DecisionMatrix read_matrix_csv(std::istream& in);
DecisionMatrix read_matrix_csv_file(const std::string& path);
// Cells use the shortest round-trip representation.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& alternative_ids,
                      const std::vector<std::string>& criterion_ids, const Matrix& values);

// directions.json: {criterion_id: "max"|"min"}, entries in file order.
DirectionVector read_directions(std::istream& in);
DirectionVector read_directions_file(const std::string& path);
std::string directions_json(const DirectionVector& dirs);

}  // namespace riskmcdm::saw
