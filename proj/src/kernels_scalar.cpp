#include "riskmcdm/kernels.hpp"

namespace riskmcdm::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void minmax_scalar(const double* x, std::size_t n, double* lo, double* hi) {
  double a = x[0];
  double b = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    a = x[i] < a ? x[i] : a;
    b = x[i] > b ? x[i] : b;
  }
  *lo = a;
  *hi = b;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

void sub_div_scalar(const double* x, double origin, double divisor, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - origin) / divisor;
}

void rsub_div_scalar(const double* x, double origin, double divisor, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (origin - x[i]) / divisor;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",     sum_scalar,   dot_scalar,     minmax_scalar,
                                 axpy_scalar,  scale_scalar, sub_div_scalar, rsub_div_scalar};
  return table;
}

}  // namespace riskmcdm::kernels
