#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "perfolab/geometry.hpp"

namespace perfolab {

/// Uniform node lattice with spacing `spacing`; node (i, j) sits at
/// origin + (i, j) * spacing. Each cell is split into two P1 triangles along
/// a diagonal that alternates with the parity of the global cell index
/// (i + j + parity) so that meshes sharing a lattice share a triangulation.
class Grid {
 public:
  Grid() = default;
  Grid(Point origin, double spacing, std::size_t nx, std::size_t ny, int parity = 0);

  /// Mesh of a rectangle; the spacing must divide both side lengths.
  static Grid on_rect(const Rect& r, double spacing);
  /// Smallest lattice window anchored at `anchor` (a node) that covers `box`.
  static Grid covering(const Rect& box, double spacing, Point anchor);

  Point origin() const { return origin_; }
  double spacing() const { return spacing_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  std::size_t cells_x() const { return nx_ - 1; }
  std::size_t cells_y() const { return ny_ - 1; }
  Rect extent() const;
  int parity() const { return parity_; }

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  Point node(std::size_t i, std::size_t j) const {
    return {origin_.x + static_cast<double>(i) * spacing_, origin_.y + static_cast<double>(j) * spacing_};
  }
  Point node(std::size_t k) const { return node(k % nx_, k / nx_); }
  bool on_boundary(std::size_t k) const {
    const std::size_t i = k % nx_, j = k / nx_;
    return i == 0 || j == 0 || i + 1 == nx_ || j + 1 == ny_;
  }

  /// Diagonal of cell (ci, cj) runs from its lower-left to upper-right node.
  bool rising_diagonal(std::size_t ci, std::size_t cj) const {
    return ((ci + cj + static_cast<std::size_t>(parity_)) & 1U) == 0U;
  }
  /// Node indices of the two triangles of a cell, counter-clockwise.
  std::array<std::array<std::size_t, 3>, 2> cell_triangles(std::size_t ci, std::size_t cj) const;

  /// Triangle containing p (ties broken towards the upper/right cell), with
  /// barycentric weights. Points outside the extent are clamped to it.
  struct Location {
    std::array<std::size_t, 3> nodes;
    std::array<double, 3> weights;
  };
  Location locate(Point p) const;

  bool same_layout(const Grid& other) const {
    return origin_ == other.origin_ && spacing_ == other.spacing_ && nx_ == other.nx_ && ny_ == other.ny_ &&
           parity_ == other.parity_;
  }

 private:
  Point origin_;
  double spacing_ = 1.0;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  int parity_ = 0;
};

/// Continuous piecewise-linear function given by its nodal values.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(Grid g, double fill = 0.0) : grid(std::move(g)), values(grid.size(), fill) {}
  Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {}

  double at(Point p) const;
};

/// Nodal interpolant of a function on a grid.
template <class F>
Field interpolate(const Grid& g, F&& f) {
  Field out(g);
  for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = f(g.node(k));
  return out;
}

// Field files: header (nx, ny, spacing, origin) followed by row-major values.
// CSV: first line "nx,ny,spacing,origin_x,origin_y", then one line per grid
// row. Binary: magic "PLFD", uint32 version 1, uint64 nx, uint64 ny, then
// float64 spacing, origin_x, origin_y and nx*ny float64 values, all
// little-endian.
void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const std::string& path);
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

}  // namespace perfolab
