#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(RISKMCDM_FIXTURE_DIR) / name;
}

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(RISKMCDM_TEST_DATA_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("riskmcdm-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

using Rows = std::vector<std::vector<double>>;

// Oracles below are written from the textbook definitions with plain row-major
// loops and share no code with the library.

struct AhpOracle {
  std::vector<double> w;
  std::vector<double> col_sums;
  double lambda = 0.0;
  double ci = 0.0;
  double cr = 0.0;
};

inline double oracle_ri(std::size_t n) {
  static const double kRi[] = {0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59};
  return kRi[n - 1];
}

inline AhpOracle ahp_oracle(const Rows& a) {
  const std::size_t n = a.size();
  AhpOracle o;
  o.col_sums.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) o.col_sums[j] += a[i][j];
  o.w.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a[i][j] / o.col_sums[j];
    o.w[i] = row / static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) o.lambda += o.w[i] * o.col_sums[i];
  o.ci = n > 1 ? (o.lambda - static_cast<double>(n)) / static_cast<double>(n - 1) : 0.0;
  const double ri = oracle_ri(n);
  o.cr = ri > 0.0 ? o.ci / ri : 0.0;
  return o;
}

// Random reciprocal matrix with Saaty-scale entries above the diagonal.
inline Rows random_reciprocal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> code(1, 9);
  std::bernoulli_distribution flip(0.5);
  Rows a(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = code(rng);
      a[i][j] = flip(rng) ? c : 1.0 / c;
      a[j][i] = 1.0 / a[i][j];
    }
  return a;
}

// a_ij = u_i / u_j for a positive vector u.
inline Rows consistent_from(const std::vector<double>& u) {
  Rows a(u.size(), std::vector<double>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) a[i][j] = u[i] / u[j];
  return a;
}

}  // namespace testsupport
