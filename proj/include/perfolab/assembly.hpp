#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perfolab/elliptic_operator.hpp"
#include "perfolab/grid.hpp"
#include "perfolab/measure.hpp"
#include "perfolab/stencil.hpp"

namespace perfolab {

/// Unconstrained P1 stiffness matrix of int A grad u . grad v, with A
/// sampled at each triangle's centroid.
StencilMatrix assemble_stiffness(const Grid& g, const EllipticOperator& op);

/// Adds int_W g u v dx. With a window W the integrand is cut by the closed
/// region's indicator on a 16-fold refined quadrature; otherwise a degree-4
/// rule is used per triangle.
void add_density_mass(StencilMatrix& m, const Grid& g, const Density& density, const Region* window = nullptr);

/// Adds sum_s l_s int_{s cap W} u v ds with 4-point Gauss on every piece of
/// the segment inside one triangle.
void add_segment_mass(StencilMatrix& m, const Grid& g, std::span<const SegmentMeasure> segments,
                      const Region* window = nullptr);

/// Matrix of (u, v) -> int u v dmu for an atom-free measure; throws
/// ValidationError if mu has atoms.
StencilMatrix assemble_measure_mass(const Grid& g, const MeasureSpec& mu, const Region* window = nullptr);

/// Load vector int f phi_k dx (degree-4 quadrature).
std::vector<double> assemble_load(const Grid& g, const std::function<double(Point)>& f);

/// Calls fn(nodes, weights, length) for every piece of segment p0-p1 that lies
/// inside one triangle of the grid; `weights` gives the barycentric
/// coordinates of the piece's endpoints.
using SegmentPieceFn = std::function<void(const std::array<std::size_t, 3>& nodes,
                                          const std::array<double, 3>& w0,
                                          const std::array<double, 3>& w1, double length)>;
void for_each_segment_piece(const Grid& g, Point p0, Point p1, const SegmentPieceFn& fn);

}  // namespace perfolab
