#include "riskmcdm/ahp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "riskmcdm/error.hpp"
#include "riskmcdm/kernels.hpp"

namespace riskmcdm::ahp {

namespace {

constexpr double kReciprocityTolerance = 1e-12;
constexpr double kUnitSumTolerance = 1e-12;

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return ids;
}

// Random consistency indices, n = 1..15.
constexpr std::array<double, 15> kRandomIndex = {0.00, 0.00, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41,
                                                 1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59};

}  // namespace

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> item_ids, Matrix entries)
    : ids_(std::move(item_ids)), entries_(std::move(entries)) {
  const std::size_t n = entries_.rows();
  if (n == 0 || entries_.cols() != n) {
    throw Error(ErrorCode::DimensionError, "pairwise matrix must be square and non-empty");
  }
  if (ids_.empty()) ids_ = default_ids(n);
  if (ids_.size() != n) throw Error(ErrorCode::DimensionError, "item id count does not match matrix order");
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_(i, i) != 1.0) throw Error(ErrorCode::ValidationError, "diagonal entries must be 1");
    for (std::size_t j = 0; j < n; ++j) {
      const double a = entries_(i, j);
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw Error(ErrorCode::InvalidIntensity, "pairwise entries must be finite and positive");
      }
      if (std::abs(a * entries_(j, i) - 1.0) > kReciprocityTolerance) {
        throw Error(ErrorCode::ValidationError, "pairwise matrix is not reciprocal at (" +
                                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

PairwiseMatrix PairwiseMatrix::from_rows(std::vector<std::string> item_ids,
                                         const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorCode::DimensionError, "pairwise matrix rows must have n entries");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return PairwiseMatrix(std::move(item_ids), std::move(m));
}

PairwiseMatrix PairwiseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return from_rows({}, rows);
}

WeightVector::WeightVector(std::vector<std::string> item_ids, std::vector<double> values)
    : ids_(std::move(item_ids)), values_(std::move(values)) {
  if (ids_.size() != values_.size()) throw Error(ErrorCode::DimensionError, "weight ids and values differ in length");
  if (values_.empty()) throw Error(ErrorCode::EmptyInput, "empty weight vector");
  double total = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0)) throw Error(ErrorCode::ValidationError, "weights must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > kUnitSumTolerance) {
    throw Error(ErrorCode::ValidationError, "weights must sum to 1");
  }
}

WeightVector WeightVector::normalized(std::vector<std::string> item_ids, std::vector<double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  if (!(total > 0.0)) throw Error(ErrorCode::ValidationError, "weights sum to zero");
  for (double& v : values) v /= total;
  return WeightVector(std::move(item_ids), std::move(values));
}

double WeightVector::at(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw Error(ErrorCode::DimensionError, "no weight for '" + std::string(id) + "'");
  return values_[static_cast<std::size_t>(it - ids_.begin())];
}

std::string_view to_string(Verdict v) { return v == Verdict::Acceptable ? "Acceptable" : "NeedsRevision"; }

PairwiseMatrix complete_reciprocal(const UpperJudgments& upper, std::size_t n, std::vector<std::string> item_ids) {
  if (n == 0) throw Error(ErrorCode::DimensionError, "matrix order must be at least 1");
  for (const auto& [key, value] : upper) {
    if (key.first >= key.second || key.second >= n) {
      throw Error(ErrorCode::DimensionError, "judgment (" + std::to_string(key.first) + "," +
                                                 std::to_string(key.second) + ") is not an upper-triangle pair");
    }
    if (value.num() <= 0) throw Error(ErrorCode::InvalidIntensity, "judgments must be positive");
  }
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto it = upper.find({i, j});
      if (it == upper.end()) {
        missing.emplace_back(i, j);
        continue;
      }
      m(i, j) = it->second.to_double();
      m(j, i) = it->second.reciprocal().to_double();
    }
  }
  if (!missing.empty()) throw IncompleteJudgments(std::move(missing));
  return PairwiseMatrix(std::move(item_ids), std::move(m));
}

std::vector<double> column_sums(const PairwiseMatrix& m) {
  std::vector<double> sums(m.order());
  for (std::size_t j = 0; j < m.order(); ++j) sums[j] = kernels::sum(m.entries().column(j));
  return sums;
}

WeightVector derive_weights(const PairwiseMatrix& m) {
  const std::size_t n = m.order();
  const auto sums = column_sums(m);
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) kernels::axpy(1.0 / sums[j], m.entries().column(j), w);
  kernels::scale(1.0 / static_cast<double>(n), w, w);
  return WeightVector::normalized(m.item_ids(), std::move(w));
}

double lambda_max(const PairwiseMatrix& m, const WeightVector& w) {
  if (w.size() != m.order()) throw Error(ErrorCode::DimensionError, "weight vector length differs from matrix order");
  const auto sums = column_sums(m);
  return kernels::dot(w.values(), sums);
}

double random_index(std::size_t n) {
  if (n < 1 || n > kRandomIndex.size()) {
    throw Error(ErrorCode::UnsupportedOrder, "no random index tabulated for order " + std::to_string(n));
  }
  return kRandomIndex[n - 1];
}

ConsistencyReport consistency(const PairwiseMatrix& m) {
  const std::size_t n = m.order();
  ConsistencyReport r;
  r.column_sums = column_sums(m);
  r.lambda_max = kernels::dot(derive_weights(m).values(), r.column_sums);
  r.ri = random_index(n);
  r.ci = n >= 2 ? (r.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1) : 0.0;
  r.cr = r.ri > 0.0 ? r.ci / r.ri : 0.0;
  r.verdict = r.cr < kConsistencyThreshold ? Verdict::Acceptable : Verdict::NeedsRevision;
  return r;
}

WeightVector aggregate_experts(std::span<const WeightVector> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::EmptyInput, "no expert weight vectors to aggregate");
  const auto& ids = vectors.front().item_ids();
  std::vector<double> mean(ids.size(), 0.0);
  for (const auto& v : vectors) {
    if (v.item_ids() != ids) throw Error(ErrorCode::DimensionError, "expert weight vectors cover different items");
    kernels::axpy(1.0, v.values(), mean);
  }
  kernels::scale(1.0 / static_cast<double>(vectors.size()), mean, mean);
  return WeightVector::normalized(ids, std::move(mean));
}

GlobalWeights global_weights(const Hierarchy& h, const LocalWeights& local) {
  const auto goal = local.find(kGoalNodeId);
  if (goal == local.end()) throw Error(ErrorCode::IncompleteWeights, "no local weights for the goal node");
  GlobalWeights out;
  for (const auto& main : h.main_criteria) {
    const double parent = goal->second.at(main.id);
    if (main.is_leaf()) {
      out[main.id] = parent;
      continue;
    }
    const auto node = local.find(main.id);
    if (node == local.end()) {
      throw Error(ErrorCode::IncompleteWeights, "no local weights for node '" + main.id + "'");
    }
    for (const auto& child : main.children) out[child.id] = node->second.at(child.id) * parent;
  }
  return out;
}

EigenResult principal_eigenvector(const PairwiseMatrix& m, double tolerance, int max_iterations) {
  const std::size_t n = m.order();
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double lambda = 0.0;
  int it = 0;
  bool converged = false;
  while (it < max_iterations) {
    ++it;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) kernels::axpy(v[j], m.entries().column(j), next);
    // v sums to 1, so the growth factor is the sum of A v.
    lambda = kernels::sum(next);
    kernels::scale(1.0 / lambda, next, next);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - v[i]));
    v.swap(next);
    if (delta < tolerance) {
      converged = true;
      break;
    }
  }
  return {WeightVector::normalized(m.item_ids(), v), lambda, it, converged};
}

}  // namespace riskmcdm::ahp
