#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "perfolab/kernels.hpp"

namespace perfolab {

/// Symmetric sparse matrix with the 9-point sparsity of a structured P1 mesh,
/// stored as five coefficient arrays (see kernels::StencilView).
class StencilMatrix {
 public:
  StencilMatrix() = default;
  StencilMatrix(std::size_t nx, std::size_t ny);

  std::size_t nx() const { return nx_; }
  std::size_t size() const { return c_.size(); }

  /// Adds v to entries (a, b) and (b, a); a == b adds to the diagonal.
  /// a and b must be neighbours in the 9-point sense.
  void add(std::size_t a, std::size_t b, double v);
  double diagonal(std::size_t k) const { return c_[k]; }
  double entry(std::size_t a, std::size_t b) const;

  void apply(std::span<const double> x, std::span<double> y) const;
  /// x^T S x
  double quadratic_form(std::span<const double> x) const;

  kernels::StencilView view() const {
    return {c_.data(), e_.data(), n_.data(), ne_.data(), nw_.data(), nx_, c_.size()};
  }

  /// Dirichlet elimination: rows and columns of constrained nodes are
  /// replaced by the identity.
  StencilMatrix with_constraints(std::span<const unsigned char> constrained) const;

  StencilMatrix& operator+=(const StencilMatrix& other);

 private:
  double* slot(std::size_t a, std::size_t b);
  const double* slot(std::size_t a, std::size_t b) const;

  std::size_t nx_ = 0;
  std::vector<double> c_, e_, n_, ne_, nw_;
};

}  // namespace perfolab
