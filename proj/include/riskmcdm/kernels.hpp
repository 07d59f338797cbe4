#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops shared by the AHP and SAW engines. Each kernel
// has a scalar reference and, on x86-64, an AVX2 variant; the variant is
// picked once at startup from CPU support and RISKMCDM_KERNEL.
//
// Elementwise kernels are bit-identical across variants. Reductions (sum,
// dot) may differ in the last bits because lane order changes the
// summation order.

namespace riskmcdm::kernels {

struct KernelTable {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // n >= 1
  void (*minmax)(const double* x, std::size_t n, double* lo, double* hi);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = alpha * x
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);
  // out = (x - origin) / divisor
  void (*sub_div)(const double* x, double origin, double divisor, double* out, std::size_t n);
  // out = (origin - x) / divisor
  void (*rsub_div)(const double* x, double origin, double divisor, double* out, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the CPU (or build target) lacks AVX2.
const KernelTable* avx2_table();

// Chosen once: RISKMCDM_KERNEL=scalar forces the reference, otherwise the
// widest supported variant.
const KernelTable& active();

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

struct Range {
  double lo;
  double hi;
};

inline Range minmax(std::span<const double> x) {
  Range r{0.0, 0.0};
  if (!x.empty()) active().minmax(x.data(), x.size(), &r.lo, &r.hi);
  return r;
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(double alpha, std::span<const double> x, std::span<double> out) {
  active().scale(alpha, x.data(), out.data(), x.size());
}

inline void sub_div(std::span<const double> x, double origin, double divisor, std::span<double> out) {
  active().sub_div(x.data(), origin, divisor, out.data(), x.size());
}

inline void rsub_div(std::span<const double> x, double origin, double divisor, std::span<double> out) {
  active().rsub_div(x.data(), origin, divisor, out.data(), x.size());
}

}  // namespace riskmcdm::kernels
