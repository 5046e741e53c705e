#include "perfolab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "perfolab/assembly.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/quadrature.hpp"
#include "perfolab/stencil.hpp"

namespace perfolab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<unsigned char> boundary_mask(const Grid& g) {
  std::vector<unsigned char> mask(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) mask[k] = g.on_boundary(k) ? 1 : 0;
  return mask;
}

/// Node index range [lo, hi] along one axis covering [a, b].
std::pair<std::size_t, std::size_t> node_span(double a, double b, double origin, double s, std::size_t n) {
  const double lo = std::max(0.0, std::floor((a - origin) / s));
  const double hi = std::min(static_cast<double>(n - 1), std::ceil((b - origin) / s));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(std::max(lo, hi))};
}

template <class Fn>
void for_nodes_in(const Grid& g, const Rect& box, Fn&& fn) {
  const auto [i0, i1] = node_span(box.x0, box.x1, g.origin().x, g.spacing(), g.nx());
  const auto [j0, j1] = node_span(box.y0, box.y1, g.origin().y, g.spacing(), g.ny());
  for (std::size_t j = j0; j <= j1; ++j)
    for (std::size_t i = i0; i <= i1; ++i) fn(i, j);
}

PdeSolution solve_with_mask(const Grid& g, const StencilMatrix& k, const LoadSpec& f,
                            const std::vector<unsigned char>& mask, const CgOptions& cg) {
  const auto load = assemble_load(g, [&](Point p) { return f(p); });
  const std::vector<double> zero(g.size(), 0.0);
  auto sol = solve_constrained(k, load, mask, zero, cg);
  return {Field(g, std::move(sol.x)), sol.stats};
}

}  // namespace

double LoadSpec::operator()(Point p) const {
  switch (kind) {
    case Kind::kConstant:
      return amplitude;
    case Kind::kProductSine:
      return amplitude * std::sin(kPi * (p.x - domain.x0) / domain.width()) *
             std::sin(kPi * (p.y - domain.y0) / domain.height());
    case Kind::kBump: {
      const double t = 1.0 - (distance(p, center) / radius) * (distance(p, center) / radius);
      return t > 0.0 ? amplitude * t * t : 0.0;
    }
  }
  return 0.0;
}

std::string LoadSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kConstant:
      os << "constant(" << amplitude << ")";
      break;
    case Kind::kProductSine:
      os << "product_sine(" << amplitude << ")";
      break;
    case Kind::kBump:
      os << "bump(" << amplitude << ", " << center.x << ", " << center.y << ", " << radius << ")";
      break;
  }
  return os.str();
}

Grid domain_mesh(const Rect& domain, double spacing) { return Grid::on_rect(domain, spacing); }

PdeSolution solve_dirichlet_perforated(const Rect& domain, const HoleFamily& holes, const EllipticOperator& op,
                                       const LoadSpec& f, double spacing, const PerforatedOptions& opt) {
  const Grid g = domain_mesh(domain, spacing);
  auto mask = boundary_mask(g);
  for (const auto& hole : holes.holes) {
    if (hole.radius <= 0.0) continue;
    if (hole.radius < 2.0 * spacing) {
      if (!opt.pin_nearest) {
        std::ostringstream os;
        os << "hole at (" << hole.center.x << ", " << hole.center.y << ") with radius " << hole.radius
           << " is under-resolved at spacing " << spacing << " (need radius >= 2 * spacing)";
        throw ValidationError(os.str());
      }
      const auto loc = g.locate(hole.center);
      std::size_t best = loc.nodes[0];
      for (std::size_t n : loc.nodes) {
        if (distance(g.node(n), hole.center) < distance(g.node(best), hole.center)) best = n;
      }
      mask[best] = 1;
      continue;
    }
    const Disk ball{hole.center, hole.radius};
    for_nodes_in(g, ball.bbox(), [&](std::size_t i, std::size_t j) {
      if (ball.contains_open(g.node(i, j))) mask[g.index(i, j)] = 1;
    });
  }
  return solve_with_mask(g, assemble_stiffness(g, op), f, mask, opt.cg);
}

PdeSolution solve_dirichlet(const Rect& domain, const EllipticOperator& op, const LoadSpec& f, double spacing,
                            const CgOptions& cg) {
  PerforatedOptions opt;
  opt.cg = cg;
  return solve_dirichlet_perforated(domain, HoleFamily{}, op, f, spacing, opt);
}

PdeSolution solve_relaxed(const Rect& domain, const MeasureSpec& mu0, const EllipticOperator& op,
                          const LoadSpec& f, double spacing, const CgOptions& cg) {
  if (mu0.has_atoms()) {
    throw ValidationError(
        "relaxed problem: atoms charge no capacity in dimension >= 2 and are not admissible; "
        "drop them (the perforated problems converge to the atom-free part mu0 of the measure)");
  }
  const Grid g = domain_mesh(domain, spacing);
  StencilMatrix k = assemble_stiffness(g, op);
  if (!mu0.is_zero()) k += assemble_measure_mass(g, mu0);
  return solve_with_mask(g, k, f, boundary_mask(g), cg);
}

Field corrector_field(const Rect& domain, const HoleFamily& holes, const EllipticOperator& op, double spacing) {
  const Grid g = domain_mesh(domain, spacing);
  Field w(g, 1.0);
  const double r = holes.reference_radius();
  for (const auto& hole : holes.holes) {
    if (hole.radius <= 0.0) continue;
    if (hole.radius < 2.0 * spacing) {
      throw ValidationError("corrector_field: hole under-resolved (need radius >= 2 * spacing)");
    }
    const Disk ball{hole.center, r}, hole_ball{hole.center, hole.radius};
    const auto [i0, i1] = node_span(ball.bbox().x0, ball.bbox().x1, g.origin().x, spacing, g.nx());
    const auto [j0, j1] = node_span(ball.bbox().y0, ball.bbox().y1, g.origin().y, spacing, g.ny());
    const Grid local(g.node(i0, j0), spacing, i1 - i0 + 1, j1 - j0 + 1,
                     static_cast<int>((i0 + j0 + static_cast<std::size_t>(g.parity())) % 2));
    std::vector<unsigned char> mask(local.size(), 0);
    std::vector<double> values(local.size(), 0.0);
    for (std::size_t k = 0; k < local.size(); ++k) {
      const Point x = local.node(k);
      if (hole_ball.contains_open(x)) {
        mask[k] = 1;
        values[k] = 1.0;
      } else if (!ball.contains_open(x)) {
        mask[k] = 1;
      }
    }
    const std::vector<double> zero(local.size(), 0.0);
    const auto sol = solve_constrained(assemble_stiffness(local, op), zero, mask, values, CgOptions{1e-12, 0, true});
    for (std::size_t jj = 0; jj < local.ny(); ++jj) {
      for (std::size_t ii = 0; ii < local.nx(); ++ii) {
        const double v = std::clamp(sol.x[local.index(ii, jj)], 0.0, 1.0);
        if (v > 0.0) w.values[g.index(i0 + ii, j0 + jj)] = 1.0 - v;
      }
    }
  }
  return w;
}

double energy_functional(const Field& u, const MeasureSpec& mu, const EllipticOperator& op) {
  double e = assemble_stiffness(u.grid, op).quadratic_form(u.values);
  const MeasureSpec diffuse{mu.domain, mu.density, {}, mu.segments};
  if (!diffuse.is_zero()) e += assemble_measure_mass(u.grid, diffuse).quadratic_form(u.values);
  for (const auto& a : mu.atoms) {
    const double v = u.at(a.position);
    e += a.mass * v * v;
  }
  return e;
}

namespace {

// Exact L2 and H1 integrals of a P1 function from its nodal values.
void p1_norms(const Grid& g, const std::vector<double>& e, double& l2sq, double& h1sq) {
  const double s = g.spacing(), area = 0.5 * s * s;
  l2sq = 0.0;
  h1sq = 0.0;
  for (std::size_t cj = 0; cj + 1 < g.ny(); ++cj) {
    for (std::size_t ci = 0; ci + 1 < g.nx(); ++ci) {
      for (const auto& t : g.cell_triangles(ci, cj)) {
        const double a = e[t[0]], b = e[t[1]], c = e[t[2]];
        l2sq += area / 12.0 * (a * a + b * b + c * c + (a + b + c) * (a + b + c));
        const Point p0 = g.node(t[0]), p1 = g.node(t[1]), p2 = g.node(t[2]);
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
        const double gx = ((b - a) * (p2.y - p0.y) - (c - a) * (p1.y - p0.y)) / det;
        const double gy = ((c - a) * (p1.x - p0.x) - (b - a) * (p2.x - p0.x)) / det;
        h1sq += area * (gx * gx + gy * gy);
      }
    }
  }
}

}  // namespace

FieldMetrics field_metrics(const Field& u, const Field& v) {
  std::vector<double> diff(u.values.size());
  if (u.grid.same_layout(v.grid)) {
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = u.values[k] - v.values[k];
  } else {
    const Rect a = u.grid.extent(), b = v.grid.extent();
    const double tol = 1e-9 * std::max(1.0, a.diameter());
    if (std::abs(a.x0 - b.x0) > tol || std::abs(a.y0 - b.y0) > tol || std::abs(a.x1 - b.x1) > tol ||
        std::abs(a.y1 - b.y1) > tol) {
      throw ValidationError("field_metrics: fields live on different domains");
    }
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = u.values[k] - v.at(u.grid.node(k));
  }
  FieldMetrics m;
  double l2sq = 0.0, h1sq = 0.0;
  p1_norms(u.grid, diff, l2sq, h1sq);
  m.l2 = std::sqrt(l2sq);
  m.h1 = std::sqrt(h1sq);
  for (double d : diff) m.linf = std::max(m.linf, std::abs(d));
  return m;
}

double l2_norm(const Field& u) {
  double l2sq = 0.0, h1sq = 0.0;
  p1_norms(u.grid, u.values, l2sq, h1sq);
  return std::sqrt(l2sq);
}

double l2_error(const Field& u, const std::function<double(Point)>& g) {
  const Grid& grid = u.grid;
  const double area = 0.5 * grid.spacing() * grid.spacing();
  double acc = 0.0;
  for (std::size_t cj = 0; cj + 1 < grid.ny(); ++cj) {
    for (std::size_t ci = 0; ci + 1 < grid.nx(); ++ci) {
      for (const auto& t : grid.cell_triangles(ci, cj)) {
        const Point p[3] = {grid.node(t[0]), grid.node(t[1]), grid.node(t[2])};
        for (const auto& q : quad::kTriangleDeg4) {
          const Point x = q.l0 * p[0] + q.l1 * p[1] + q.l2 * p[2];
          const double d = q.l0 * u.values[t[0]] + q.l1 * u.values[t[1]] + q.l2 * u.values[t[2]] - g(x);
          acc += q.w * area * d * d;
        }
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace perfolab
