#pragma once

#include <functional>
#include <string>

#include "perfolab/cg.hpp"
#include "perfolab/elliptic_operator.hpp"
#include "perfolab/grid.hpp"
#include "perfolab/measure.hpp"
#include "perfolab/perforation.hpp"

namespace perfolab {

/// Analytic right-hand sides.
///   constant:      f = amplitude
///   product_sine:  f = amplitude sin(pi (x-x0)/Lx) sin(pi (y-y0)/Ly) on the domain
///   bump:          f = amplitude (1 - |x-c|^2/R^2)^2 inside B_R(c), 0 outside
struct LoadSpec {
  enum class Kind { kConstant, kProductSine, kBump };
  Kind kind = Kind::kConstant;
  double amplitude = 1.0;
  Rect domain;
  Point center{0.5, 0.5};
  double radius = 0.25;

  static LoadSpec constant(double value) { return {Kind::kConstant, value, {}, {}, 0.25}; }
  static LoadSpec product_sine(const Rect& domain, double amplitude) {
    return {Kind::kProductSine, amplitude, domain, {}, 0.25};
  }
  static LoadSpec bump(Point center, double radius, double amplitude) {
    return {Kind::kBump, amplitude, {}, center, radius};
  }

  double operator()(Point p) const;
  std::string describe() const;
  friend bool operator==(const LoadSpec&, const LoadSpec&) = default;
};

struct PdeSolution {
  Field u;
  SolveStats stats;
};

struct PerforatedOptions {
  /// Under-resolved holes constrain only the node nearest to their centre
  /// instead of failing. Experimental: changes the effective capacity.
  bool pin_nearest = false;
  CgOptions cg{};
};

/// Mesh of the domain with the given spacing (must divide both sides).
Grid domain_mesh(const Rect& domain, double spacing);

/// L u = f in the perforated domain, u = 0 on the boundary and at every node
/// strictly inside a hole of positive radius.
PdeSolution solve_dirichlet_perforated(const Rect& domain, const HoleFamily& holes, const EllipticOperator& op,
                                       const LoadSpec& f, double spacing, const PerforatedOptions& opt = {});

/// Unperforated Dirichlet problem (the same system as an empty hole family).
PdeSolution solve_dirichlet(const Rect& domain, const EllipticOperator& op, const LoadSpec& f, double spacing,
                            const CgOptions& cg = {});

/// L u + mu0 u = f with homogeneous Dirichlet data; mu0 must be atom-free.
PdeSolution solve_relaxed(const Rect& domain, const MeasureSpec& mu0, const EllipticOperator& op,
                          const LoadSpec& f, double spacing, const CgOptions& cg = {});

/// Global corrector: 1 outside the reference balls, 1 - v inside, where v is
/// the discrete capacitary potential of hole i in its reference ball solved
/// on the global mesh's nodes (0 inside the hole).
Field corrector_field(const Rect& domain, const HoleFamily& holes, const EllipticOperator& op, double spacing);

/// <L u, u> + int u^2 dmu; atoms contribute m u(x)^2 via the interpolant.
double energy_functional(const Field& u, const MeasureSpec& mu, const EllipticOperator& op);

struct FieldMetrics {
  double l2 = 0.0;    ///< ||u - v||_{L^2}
  double h1 = 0.0;    ///< |u - v|_{H^1}
  double linf = 0.0;  ///< max nodal |u - v|
};

/// Exact integrals of the piecewise-linear difference on u's mesh. When the
/// meshes differ, v is first replaced by its nodal interpolant on u's mesh
/// (first-order P1 evaluation); both meshes must cover the same rectangle.
FieldMetrics field_metrics(const Field& u, const Field& v);

/// ||u||_{L^2} of one field.
double l2_norm(const Field& u);

/// ||u - g||_{L^2} against an analytic function (degree-4 rule per triangle).
double l2_error(const Field& u, const std::function<double(Point)>& g);

}  // namespace perfolab
