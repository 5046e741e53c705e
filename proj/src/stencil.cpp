#include "perfolab/stencil.hpp"

#include <algorithm>

#include "perfolab/errors.hpp"

namespace perfolab {

StencilMatrix::StencilMatrix(std::size_t nx, std::size_t ny)
    : nx_(nx), c_(nx * ny, 0.0), e_(nx * ny, 0.0), n_(nx * ny, 0.0), ne_(nx * ny, 0.0), nw_(nx * ny, 0.0) {}

double* StencilMatrix::slot(std::size_t a, std::size_t b) {
  return const_cast<double*>(static_cast<const StencilMatrix*>(this)->slot(a, b));
}

const double* StencilMatrix::slot(std::size_t a, std::size_t b) const {
  if (a == b) return &c_[a];
  const std::size_t lo = std::min(a, b), hi = std::max(a, b);
  const std::size_t d = hi - lo;
  const std::size_t ilo = lo % nx_, ihi = hi % nx_;
  if (d == 1 && ihi == ilo + 1) return &e_[lo];
  if (d == nx_) return &n_[lo];
  if (d == nx_ + 1 && ihi == ilo + 1) return &ne_[lo];
  if (d == nx_ - 1 && ilo == ihi + 1) return &nw_[lo];
  return nullptr;
}

void StencilMatrix::add(std::size_t a, std::size_t b, double v) {
  double* s = slot(a, b);
  if (s == nullptr) throw NumericalError("stencil coupling outside the 9-point pattern");
  *s += v;
}

double StencilMatrix::entry(std::size_t a, std::size_t b) const {
  const double* s = slot(a, b);
  return s == nullptr ? 0.0 : *s;
}

void StencilMatrix::apply(std::span<const double> x, std::span<double> y) const {
  kernels::active().stencil_apply(view(), x.data(), y.data());
}

double StencilMatrix::quadratic_form(std::span<const double> x) const {
  std::vector<double> y(x.size());
  apply(x, y);
  return kernels::active().dot(x.data(), y.data(), x.size());
}

StencilMatrix StencilMatrix::with_constraints(std::span<const unsigned char> constrained) const {
  StencilMatrix out = *this;
  const std::size_t size = c_.size();
  for (std::size_t k = 0; k < size; ++k) {
    if (!constrained[k]) continue;
    out.c_[k] = 1.0;
    out.e_[k] = 0.0;
    out.n_[k] = 0.0;
    out.ne_[k] = 0.0;
    out.nw_[k] = 0.0;
    if (k >= 1) out.e_[k - 1] = 0.0;
    if (k >= nx_) out.n_[k - nx_] = 0.0;
    if (k >= nx_ + 1) out.ne_[k - nx_ - 1] = 0.0;
    if (k + 1 >= nx_ && k + 1 - nx_ < size) out.nw_[k + 1 - nx_] = 0.0;
  }
  return out;
}

StencilMatrix& StencilMatrix::operator+=(const StencilMatrix& other) {
  if (other.nx_ != nx_ || other.size() != size()) throw NumericalError("stencil shape mismatch");
  for (std::size_t k = 0; k < size(); ++k) {
    c_[k] += other.c_[k];
    e_[k] += other.e_[k];
    n_[k] += other.n_[k];
    ne_[k] += other.ne_[k];
    nw_[k] += other.nw_[k];
  }
  return *this;
}

}  // namespace perfolab
