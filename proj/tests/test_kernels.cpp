#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "riskmcdm/kernels.hpp"

using namespace riskmcdm::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Lengths around the 4-lane width and its unrolled multiples.
const std::size_t kLengths[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 1023};

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
  const auto& s = scalar_table();
  std::mt19937_64 rng(7);
  for (std::size_t n : kLengths) {
    const auto x = random_vec(rng, n);
    const auto y = random_vec(rng, n);
    double sum = 0.0, dot = 0.0, lo = x[0], hi = x[0];
    for (std::size_t i = 0; i < n; ++i) {
      sum += x[i];
      dot += x[i] * y[i];
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
    CHECK(s.sum(x.data(), n) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(s.dot(x.data(), y.data(), n) == doctest::Approx(dot).epsilon(1e-12));
    double klo, khi;
    s.minmax(x.data(), n, &klo, &khi);
    CHECK(klo == lo);
    CHECK(khi == hi);
    if (hi == lo) continue;
    std::vector<double> out(n);
    s.sub_div(x.data(), lo, hi - lo, out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == (x[i] - lo) / (hi - lo));
    s.rsub_div(x.data(), hi, hi - lo, out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == (hi - x[i]) / (hi - lo));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const KernelTable* v = avx2_table();
  if (v == nullptr) {
    MESSAGE("AVX2 not available on this host; equivalence skipped");
    return;
  }
  const auto& s = scalar_table();
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    for (std::size_t n : kLengths) {
      const auto x = random_vec(rng, n);
      const auto y = random_vec(rng, n);
      const double alpha = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);

      // Reductions reassociate; elementwise kernels must be bit-identical.
      double mag = 0.0, dmag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mag += std::fabs(x[i]);
        dmag += std::fabs(x[i] * y[i]);
      }
      CHECK(std::fabs(v->sum(x.data(), n) - s.sum(x.data(), n)) <= 1e-14 * mag + 1e-300);
      CHECK(std::fabs(v->dot(x.data(), y.data(), n) - s.dot(x.data(), y.data(), n)) <= 1e-14 * dmag + 1e-300);

      double lo1, hi1, lo2, hi2;
      s.minmax(x.data(), n, &lo1, &hi1);
      v->minmax(x.data(), n, &lo2, &hi2);
      CHECK(lo1 == lo2);
      CHECK(hi1 == hi2);

      std::vector<double> a = y, b = y;
      s.axpy(alpha, x.data(), a.data(), n);
      v->axpy(alpha, x.data(), b.data(), n);
      CHECK(bit_equal(a, b));

      std::vector<double> o1(n), o2(n);
      s.scale(alpha, x.data(), o1.data(), n);
      v->scale(alpha, x.data(), o2.data(), n);
      CHECK(bit_equal(o1, o2));

      s.sub_div(x.data(), lo1, hi1 - lo1, o1.data(), n);
      v->sub_div(x.data(), lo1, hi1 - lo1, o2.data(), n);
      CHECK(bit_equal(o1, o2));

      s.rsub_div(x.data(), hi1, hi1 - lo1, o1.data(), n);
      v->rsub_div(x.data(), hi1, hi1 - lo1, o2.data(), n);
      CHECK(bit_equal(o1, o2));
    }
  }
}

TEST_CASE("dispatch honours RISKMCDM_KERNEL") {
  const char* env = std::getenv("RISKMCDM_KERNEL");
  if (env != nullptr && std::string(env) == "scalar") {
    CHECK(std::string(active().name) == scalar_table().name);
  } else if (avx2_table() != nullptr) {
    CHECK(std::string(active().name) == avx2_table()->name);
  }
}

TEST_CASE("span wrappers") {
  std::vector<double> x{3.0, -1.0, 4.0, 1.5};
  CHECK(sum(x) == 7.5);
  const auto r = minmax(x);
  CHECK(r.lo == -1.0);
  CHECK(r.hi == 4.0);
  CHECK(minmax(std::span<const double>{}).lo == 0.0);
  std::vector<double> y(4, 1.0);
  axpy(2.0, x, y);
  CHECK(y == std::vector<double>{7.0, -1.0, 9.0, 4.0});
}
