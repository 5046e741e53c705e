#include "perfolab/cg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "perfolab/errors.hpp"
#include "perfolab/kernels.hpp"

namespace perfolab {

namespace {

template <class Matrix>
SolveStats pcg(const Matrix& s, std::span<const double> b, std::span<double> x, const CgOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const auto& kt = kernels::active();
  const std::size_t n = b.size();
  const int cap = opt.max_iterations > 0
                      ? opt.max_iterations
                      : static_cast<int>(std::ceil(50.0 * std::sqrt(static_cast<double>(n))));
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  const double bnorm = std::sqrt(kt.dot(b.data(), b.data(), n));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0, elapsed()};
  }

  std::vector<double> dinv(n), r(n), z(n), p(n), q(n);
  double dmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = s.diagonal(k);
    if (!(d > 0.0)) throw NumericalError("matrix diagonal is not positive; operator is not elliptic");
    dinv[k] = 1.0 / d;
    dmax = std::max(dmax, d);
  }
  s.apply(x, r);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];

  auto target_for = [&] {
    if (!opt.backward_error) return opt.rel_tol * bnorm;
    return opt.rel_tol * (2.0 * dmax * std::sqrt(kt.dot(x.data(), x.data(), n)) + bnorm);
  };
  double target = target_for();
  double rnorm = std::sqrt(kt.dot(r.data(), r.data(), n));
  if (rnorm <= target) return {0, rnorm / bnorm, elapsed()};

  double rz = kt.scale_dot(dinv.data(), r.data(), z.data(), n);
  p = z;
  for (int it = 1; it <= cap; ++it) {
    s.apply(p, q);
    const double pq = kt.dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) throw NumericalError("conjugate gradients broke down (matrix not positive definite)");
    const double alpha = rz / pq;
    kt.axpy(alpha, p.data(), x.data(), n);
    kt.axpy(-alpha, q.data(), r.data(), n);
    rnorm = std::sqrt(kt.dot(r.data(), r.data(), n));
    if (opt.backward_error) target = target_for();
    if (rnorm <= target) {
      // Confirm against the true residual; recurrence drift can hide a stall.
      s.apply(x, q);
      for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
      rnorm = std::sqrt(kt.dot(r.data(), r.data(), n));
      if (rnorm <= target) return {it, rnorm / bnorm, elapsed()};
    }
    const double rz_new = kt.scale_dot(dinv.data(), r.data(), z.data(), n);
    kt.xpby(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
  }
  std::ostringstream os;
  os << "conjugate gradients did not converge in " << cap << " iterations (relative residual "
     << rnorm / bnorm << ", target " << opt.rel_tol << ")";
  throw NumericalError(os.str());
}

}  // namespace

SolveStats conjugate_gradient(const StencilMatrix& s, std::span<const double> b, std::span<double> x,
                              const CgOptions& opt) {
  return pcg(s, b, x, opt);
}

ConstrainedSolution solve_constrained(const StencilMatrix& k, std::span<const double> load,
                                      std::span<const unsigned char> constrained,
                                      std::span<const double> values, const CgOptions& opt) {
  const std::size_t n = k.size();
  std::vector<double> g(n, 0.0);
  bool nonzero_values = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (constrained[i]) {
      g[i] = values[i];
      nonzero_values = nonzero_values || values[i] != 0.0;
    }
  }
  std::vector<double> b(n);
  if (nonzero_values) {
    k.apply(g, b);
    for (std::size_t i = 0; i < n; ++i) b[i] = load[i] - b[i];
  } else {
    b.assign(load.begin(), load.end());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (constrained[i]) b[i] = g[i];
  }
  const StencilMatrix s = k.with_constraints(constrained);
  ConstrainedSolution out{g, {}};
  out.stats = conjugate_gradient(s, b, out.x, opt);
  for (std::size_t i = 0; i < n; ++i) {
    if (constrained[i]) out.x[i] = g[i];
  }
  return out;
}

}  // namespace perfolab
