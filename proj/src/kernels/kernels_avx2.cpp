// Compiled with -mavx2 -mfma; only reached when CPUID reports both.
#include <immintrin.h>

#include <algorithm>

#include "perfolab/kernels.hpp"

namespace perfolab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void stencil_apply(const StencilView& s, const double* x, double* y) {
  const std::size_t nx = s.nx, size = s.size;
  const std::size_t lo = std::min(size, nx + 1);
  const std::size_t hi = size > nx + 1 ? size - nx - 1 : lo;
  for (std::size_t k = 0; k < lo; ++k) y[k] = stencil_row(s, x, k);

  std::size_t k = lo;
  for (; k + 4 <= hi; k += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(s.c + k), _mm256_loadu_pd(x + k));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.e + k), _mm256_loadu_pd(x + k + 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.e + k - 1), _mm256_loadu_pd(x + k - 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.n + k), _mm256_loadu_pd(x + k + nx), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.n + k - nx), _mm256_loadu_pd(x + k - nx), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.ne + k), _mm256_loadu_pd(x + k + nx + 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.ne + k - nx - 1), _mm256_loadu_pd(x + k - nx - 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.nw + k), _mm256_loadu_pd(x + k + nx - 1), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(s.nw + k - nx + 1), _mm256_loadu_pd(x + k - nx + 1), acc);
    _mm256_storeu_pd(y + k, acc);
  }
  for (; k < hi; ++k) {
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
  for (std::size_t j = std::max(lo, hi); j < size; ++j) y[j] = stencil_row(s, x, j);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), s3);
  }
  for (; k + 4 <= n; k += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + k), _mm256_loadu_pd(x + k)));
  }
  for (; k < n; ++k) y[k] = x[k] + b * y[k];
}

double scale_dot(const double* d, const double* r, double* z, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d r0 = _mm256_loadu_pd(r + k), r1 = _mm256_loadu_pd(r + k + 4);
    const __m256d z0 = _mm256_mul_pd(_mm256_loadu_pd(d + k), r0);
    const __m256d z1 = _mm256_mul_pd(_mm256_loadu_pd(d + k + 4), r1);
    _mm256_storeu_pd(z + k, z0);
    _mm256_storeu_pd(z + k + 4, z1);
    s0 = _mm256_fmadd_pd(r0, z0, s0);
    s1 = _mm256_fmadd_pd(r1, z1, s1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; k < n; ++k) {
    z[k] = d[k] * r[k];
    s += r[k] * z[k];
  }
  return s;
}

}  // namespace perfolab::kernels::avx2
