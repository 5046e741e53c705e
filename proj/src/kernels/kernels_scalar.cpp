#include <algorithm>

#include "perfolab/kernels.hpp"

namespace perfolab::kernels::scalar {

void stencil_apply(const StencilView& s, const double* x, double* y) {
  const std::size_t nx = s.nx, size = s.size;
  const std::size_t lo = std::min(size, nx + 1);
  const std::size_t hi = size > nx + 1 ? size - nx - 1 : lo;
  for (std::size_t k = 0; k < lo; ++k) y[k] = stencil_row(s, x, k);
  for (std::size_t k = lo; k < hi; ++k) {
    double acc = s.c[k] * x[k];
    acc += s.e[k] * x[k + 1];
    acc += s.e[k - 1] * x[k - 1];
    acc += s.n[k] * x[k + nx];
    acc += s.n[k - nx] * x[k - nx];
    acc += s.ne[k] * x[k + nx + 1];
    acc += s.ne[k - nx - 1] * x[k - nx - 1];
    acc += s.nw[k] * x[k + nx - 1];
    acc += s.nw[k - nx + 1] * x[k - nx + 1];
    y[k] = acc;
  }
  for (std::size_t k = std::max(lo, hi); k < size; ++k) y[k] = stencil_row(s, x, k);
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + b * y[k];
}

double scale_dot(const double* d, const double* r, double* z, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = d[k] * r[k];
    s += r[k] * z[k];
  }
  return s;
}

}  // namespace perfolab::kernels::scalar
