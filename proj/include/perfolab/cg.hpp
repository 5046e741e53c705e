#pragma once

#include <span>
#include <vector>

#include "perfolab/stencil.hpp"

namespace perfolab {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double wall_ms = 0.0;
};

struct CgOptions {
  double rel_tol = 1e-10;
  /// 0 selects the default cap of 50 * sqrt(unknowns).
  int max_iterations = 0;
  /// Also accept ||b - S x|| <= rel_tol (||S|| ||x|| + ||b||), the normwise
  /// backward error, with ||S|| estimated as twice the largest diagonal entry.
  /// For right-hand sides much smaller than S x (mass-weighted loads on fine
  /// meshes) the plain relative test sits below the rounding floor.
  bool backward_error = false;
};

/// Jacobi-preconditioned conjugate gradients for the SPD system S x = b.
/// `x` holds the initial guess on entry. Throws NumericalError when the
/// iteration cap is reached before ||b - S x|| <= rel_tol ||b||.
SolveStats conjugate_gradient(const StencilMatrix& s, std::span<const double> b, std::span<double> x,
                              const CgOptions& opt = {});

/// Solves K x = f on free nodes with x = values on constrained nodes, where
/// K is the unconstrained (assembled) matrix.
struct ConstrainedSolution {
  std::vector<double> x;
  SolveStats stats;
};
ConstrainedSolution solve_constrained(const StencilMatrix& k, std::span<const double> load,
                                      std::span<const unsigned char> constrained,
                                      std::span<const double> values, const CgOptions& opt = {});

}  // namespace perfolab
