#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/matrix.hpp"
#include "riskmcdm/rational.hpp"

namespace riskmcdm::ahp {

inline constexpr double kConsistencyThreshold = 0.10;

// Positive reciprocal judgment matrix for one comparison node.
class PairwiseMatrix {
 public:
  // Checks diagonal = 1, positivity and a_ij * a_ji = 1 within 1e-12.
  PairwiseMatrix(std::vector<std::string> item_ids, Matrix entries);
  static PairwiseMatrix from_rows(std::vector<std::string> item_ids,
                                  const std::vector<std::vector<double>>& rows);
  static PairwiseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t order() const noexcept { return entries_.rows(); }
  const std::vector<std::string>& item_ids() const noexcept { return ids_; }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  std::vector<std::string> ids_;
  Matrix entries_;
};

// Normalized priority vector; sums to 1 within 1e-12.
class WeightVector {
 public:
  WeightVector(std::vector<std::string> item_ids, std::vector<double> values);
  // Divides by the sum first; for printed or averaged values that carry
  // rounding.
  static WeightVector normalized(std::vector<std::string> item_ids, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& item_ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  // Throws Error{DimensionError} for an unknown id.
  double at(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

enum class Verdict { Acceptable, NeedsRevision };
std::string_view to_string(Verdict v);

struct ConsistencyReport {
  double lambda_max = 0.0;
  double ci = 0.0;
  double ri = 0.0;
  double cr = 0.0;
  std::vector<double> column_sums;
  Verdict verdict = Verdict::Acceptable;
};

// Upper-triangle judgments keyed by 0-based (i, j), i < j; the value is the
// cell a_ij.
using UpperJudgments = std::map<std::pair<std::size_t, std::size_t>, Rational>;

PairwiseMatrix complete_reciprocal(const UpperJudgments& upper, std::size_t n,
                                   std::vector<std::string> item_ids = {});

// Column-normalize then average rows.
WeightVector derive_weights(const PairwiseMatrix& m);

std::vector<double> column_sums(const PairwiseMatrix& m);

// Sum of w_i * S_i with S_i the column sums of the un-normalized matrix.
double lambda_max(const PairwiseMatrix& m, const WeightVector& w);

ConsistencyReport consistency(const PairwiseMatrix& m);

// Tabulated random index for orders 1..15.
double random_index(std::size_t n);

// Componentwise mean over experts, renormalized.
WeightVector aggregate_experts(std::span<const WeightVector> vectors);

// Local vectors keyed by comparison node id: "goal" over main criteria, then
// one per non-leaf main criterion over its children.
using LocalWeights = std::map<std::string, WeightVector, std::less<>>;
using GlobalWeights = std::map<std::string, double, std::less<>>;

GlobalWeights global_weights(const Hierarchy& h, const LocalWeights& local);

struct EigenResult {
  WeightVector weights;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration for the principal eigenvector; a cross-check for the
// column-normalization estimator.
EigenResult principal_eigenvector(const PairwiseMatrix& m, double tolerance = 1e-10,
                                  int max_iterations = 10000);

}  // namespace riskmcdm::ahp
