#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "perfolab/elliptic_operator.hpp"
#include "perfolab/geometry.hpp"
#include "perfolab/grid.hpp"
#include "perfolab/measure.hpp"

namespace perfolab {

/// Harmonic capacity of the concentric condenser (B_rho, B_r) in dimension n:
///   n = 2: 2 pi / ln(r / rho)        n = 3: 4 pi / (1/rho - 1/r)
double cap_concentric_closed_form(double rho, double r, int n = 2);

/// Mesh used for a condenser computation. The lattice is anchored at
/// `anchor` (defaults to the centre of the outer region's bounding box), so
/// problems sharing an anchor and spacing share nodes and triangles.
struct CapacityMesh {
  double spacing = 0.0;
  std::optional<Point> anchor;
};

/// Discrete L-capacity of V relative to U on the structured P1 mesh: nodes in
/// closure(V) are fixed to 1, nodes outside the open U to 0. Conforming, so
/// the value approaches the true capacity from above under refinement.
double cap_variational(const Region& v, const Region& u, const EllipticOperator& op, const CapacityMesh& mesh);

/// Definition of the mu-capacity of E in A:
///   min { <L u, u> + int_E u^2 dmu : u - 1 in H^1_0(A) },
/// computed in the variable w = 1 - u in H^1_0(A). With `infinite_on_e` the
/// measure is infinity on E and the result is the L-capacity of E in A.
double mu_capacity(const Region& e, const Region& a, const MeasureSpec& mu, const EllipticOperator& op,
                   const CapacityMesh& mesh, bool infinite_on_e = false);

struct CapacitaryPotential {
  Field w;                          ///< equilibrium potential, clamped to [0, 1]
  std::vector<double> gamma;        ///< inner distribution (on nodes fixed to 1)
  std::vector<double> nu;           ///< outer distribution (on nodes fixed to 0)
  std::vector<unsigned char> inner; ///< nodes of closure(V)
  std::vector<unsigned char> outer; ///< nodes outside the open U
  double cap_value = 0.0;

  double gamma_mass() const;
  double nu_mass() const;
};

/// Equilibrium potential of V in U with its capacitary distributions, taken as
/// residuals of the unconstrained operator at the constrained solution, so
/// that sum(gamma) = sum(nu) = cap_value up to solver tolerance.
CapacitaryPotential capacitary_potential(const Region& v, const Region& u, const EllipticOperator& op,
                                         const CapacityMesh& mesh);

/// Average of u against the outer distribution: sum(u nu) / sum(nu).
double boundary_average(const Field& u, const CapacitaryPotential& pot);

/// L-capacity of (B_rho(center), B_r(center)) on a boundary-fitted log-polar
/// mesh (64 x 128 cells, sparse LDLT). Continuous in rho, exact for the
/// Laplacian.
double annular_capacity(double rho, double r, const EllipticOperator& op, Point center = {});

/// Radius rho of the hole with cap^L(B_rho, B_r) = target (rho = 0 for target
/// 0). Closed-form inversion for the Laplacian; otherwise a bracketed root
/// search (Illinois regula falsi) in tau = 1 / ln(r / rho) over
/// annular_capacity. Radii below the smallest double come back as 0.
double hole_radius(double target, double r, const EllipticOperator& op, double tol = 1e-6,
                   Point center = {}, int n = 2);

/// Memo of hole radii keyed by operator fingerprint, outer radius, target and
/// (for variable coefficients) centre. Concurrent readers, one writer at a time.
class RadiusCache {
 public:
  double radius(double target, double r, const EllipticOperator& op, double tol, Point center);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, double> cache_;
};

/// Empirical Poincare modulus on the cube Q_r(center): with rho chosen by
/// cap^L(B_rho, B_r) = mu(Qhat_r), returns the largest ratio
///   || u - M u ||_{L^2_mu(Qhat_r)} / || grad u ||_{L^2(Q_r)}
/// over the first `corpus_size` reference fields. Atoms are rejected.
double poincare_modulus_estimate(const MeasureSpec& mu, double r, Point center, const EllipticOperator& op,
                                 std::size_t corpus_size);

}  // namespace perfolab
