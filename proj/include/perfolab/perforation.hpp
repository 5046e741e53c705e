#pragma once

#include <array>
#include <string>
#include <vector>

#include "perfolab/elliptic_operator.hpp"
#include "perfolab/geometry.hpp"
#include "perfolab/measure.hpp"

namespace perfolab {

/// Lattice cubes Q_h^i = [i/h, (i+1)/h) whose closures lie in the open domain,
/// sorted lexicographically by (i1, i2).
struct GridLevel {
  int h = 1;
  std::vector<std::array<int, 2>> interior_indices;
};

GridLevel interior_cubes(const Rect& domain, int h);

struct Hole {
  std::array<int, 2> index{};
  Point center;
  double radius = 0.0;  ///< 0 for cubes without mass (recorded, never constrained)
  double mass = 0.0;

  friend bool operator==(const Hole&, const Hole&) = default;
};

/// Capacity-matched balls: hole i sits at the centre of cube i with
/// cap^L(B_radius, B_{1/(2h)}) = mass.
struct HoleFamily {
  int h = 1;
  std::vector<Hole> holes;
  std::string op_fingerprint;

  double reference_radius() const { return 0.5 / static_cast<double>(h); }
  friend bool operator==(const HoleFamily&, const HoleFamily&) = default;
};

/// Radii use a process-wide memo keyed by operator, target and (for variable
/// coefficients) cube centre. Cubes are processed in parallel.
HoleFamily build_holes(const Rect& domain, const MeasureSpec& mu, const EllipticOperator& op, int h);

struct HolesReport {
  std::size_t cubes = 0;        ///< interior cubes, including zero-mass ones
  std::size_t perforating = 0;  ///< holes with positive radius
  double min_radius = 0.0;      ///< over positive radii; 0 when there are none
  double max_radius = 0.0;
  double total_capacity = 0.0;  ///< sum of matched masses
  bool resolvable = true;       ///< every positive radius >= 2 * spacing
};

HolesReport holes_report(const HoleFamily& family, double mesh_spacing);

std::string holes_to_json(const HoleFamily& family);
HoleFamily holes_from_json(const std::string& text);

}  // namespace perfolab
