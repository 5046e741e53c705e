#pragma once

// Data-parallel inner loops of the solver: the symmetric 9-point stencil
// product and the BLAS-1 style vector updates used by conjugate gradients.
// Every kernel exists as a portable scalar reference and as an AVX2/FMA
// variant; the variant is picked once at runtime from CPUID, overridable with
// PERFOLAB_SIMD=scalar|avx2.

#include <cstddef>
#include <string_view>

namespace perfolab::kernels {

/// Symmetric 9-point operator on an nx-by-ny node grid, row-major (k = j*nx+i).
/// Only the centre and the four "forward" couplings are stored:
///   e[k]  couples k and k+1        n[k]  couples k and k+nx
///   ne[k] couples k and k+nx+1     nw[k] couples k and k+nx-1
/// Couplings that would leave the grid must be zero.
struct StencilView {
  const double* c;
  const double* e;
  const double* n;
  const double* ne;
  const double* nw;
  std::size_t nx;
  std::size_t size;
};

struct KernelTable {
  /// y = S x
  void (*stencil_apply)(const StencilView& s, const double* x, double* y);
  /// sum_k a[k] b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = x + b y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  /// z = d .* r, returns sum_k r[k] z[k]
  double (*scale_dot)(const double* d, const double* r, double* z, std::size_t n);
};

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
const KernelTable& table(Isa isa);
/// Table selected for this process (CPU detection plus env override).
const KernelTable& active();
Isa active_isa();

namespace scalar {
void stencil_apply(const StencilView& s, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
double scale_dot(const double* d, const double* r, double* z, std::size_t n);
}  // namespace scalar

#if defined(PERFOLAB_HAVE_AVX2)
namespace avx2 {
void stencil_apply(const StencilView& s, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
double scale_dot(const double* d, const double* r, double* z, std::size_t n);
}  // namespace avx2
#endif

/// Stencil row k with bounds checks; shared by both variants for the
/// first and last nx+1 rows where shifted loads would leave the arrays.
inline double stencil_row(const StencilView& s, const double* x, std::size_t k) {
  const std::size_t nx = s.nx, size = s.size;
  double acc = s.c[k] * x[k];
  if (k + 1 < size) acc += s.e[k] * x[k + 1];
  if (k >= 1) acc += s.e[k - 1] * x[k - 1];
  if (k + nx < size) acc += s.n[k] * x[k + nx];
  if (k >= nx) acc += s.n[k - nx] * x[k - nx];
  if (k + nx + 1 < size) acc += s.ne[k] * x[k + nx + 1];
  if (k >= nx + 1) acc += s.ne[k - nx - 1] * x[k - nx - 1];
  if (k + nx - 1 < size && k + nx >= 1) acc += s.nw[k] * x[k + nx - 1];
  if (k + 1 >= nx && k + 1 - nx < size) acc += s.nw[k + 1 - nx] * x[k + 1 - nx];
  return acc;
}

}  // namespace perfolab::kernels
