#include "perfolab/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "perfolab/errors.hpp"
#include "perfolab/quadrature.hpp"

namespace perfolab {

namespace {

struct Triangle {
  std::array<std::size_t, 3> nodes;
  std::array<Point, 3> p;
  double area;
};

Triangle make_triangle(const Grid& g, const std::array<std::size_t, 3>& nodes) {
  Triangle t{nodes, {g.node(nodes[0]), g.node(nodes[1]), g.node(nodes[2])}, 0.0};
  const Point e1 = t.p[1] - t.p[0], e2 = t.p[2] - t.p[0];
  t.area = 0.5 * std::abs(e1.x * e2.y - e1.y * e2.x);
  return t;
}

template <class F>
void for_each_triangle(const Grid& g, F&& fn) {
  for (std::size_t cj = 0; cj < g.cells_y(); ++cj) {
    for (std::size_t ci = 0; ci < g.cells_x(); ++ci) {
      for (const auto& tri : g.cell_triangles(ci, cj)) fn(make_triangle(g, tri));
    }
  }
}

Point at_bary(const Triangle& t, double l0, double l1, double l2) {
  return {l0 * t.p[0].x + l1 * t.p[1].x + l2 * t.p[2].x, l0 * t.p[0].y + l1 * t.p[1].y + l2 * t.p[2].y};
}

void scatter(StencilMatrix& m, const Triangle& t, const double local[3][3]) {
  for (int a = 0; a < 3; ++a) {
    m.add(t.nodes[a], t.nodes[a], local[a][a]);
    for (int b = a + 1; b < 3; ++b) m.add(t.nodes[a], t.nodes[b], local[a][b]);
  }
}

bool boxes_overlap(const Rect& a, const Rect& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

Rect triangle_bbox(const Triangle& t) {
  return {std::min({t.p[0].x, t.p[1].x, t.p[2].x}), std::min({t.p[0].y, t.p[1].y, t.p[2].y}),
          std::max({t.p[0].x, t.p[1].x, t.p[2].x}), std::max({t.p[0].y, t.p[1].y, t.p[2].y})};
}

}  // namespace

StencilMatrix assemble_stiffness(const Grid& g, const EllipticOperator& op) {
  StencilMatrix k(g.nx(), g.ny());
  for_each_triangle(g, [&](const Triangle& t) {
    const double area2 = 2.0 * t.area;
    const double gx[3] = {(t.p[1].y - t.p[2].y) / area2, (t.p[2].y - t.p[0].y) / area2,
                          (t.p[0].y - t.p[1].y) / area2};
    const double gy[3] = {(t.p[2].x - t.p[1].x) / area2, (t.p[0].x - t.p[2].x) / area2,
                          (t.p[1].x - t.p[0].x) / area2};
    // Orientation sign cancels in the products below.
    const Sym2 a = op.at(at_bary(t, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
    double local[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        local[i][j] = t.area * (a.a11 * gx[i] * gx[j] + a.a12 * (gx[i] * gy[j] + gy[i] * gx[j]) +
                                a.a22 * gy[i] * gy[j]);
      }
    }
    scatter(k, t, local);
  });
  return k;
}

void add_density_mass(StencilMatrix& m, const Grid& g, const Density& density, const Region* window) {
  if (density.is_zero()) return;
  const Rect wbox = window != nullptr ? window->bbox() : Rect{};
  if (window != nullptr && window->is_empty()) return;
  for_each_triangle(g, [&](const Triangle& t) {
    double local[3][3] = {};
    if (window == nullptr) {
      for (const auto& q : quad::kTriangleDeg4) {
        const double l[3] = {q.l0, q.l1, q.l2};
        const double gw = q.w * density(at_bary(t, q.l0, q.l1, q.l2));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) local[i][j] += gw * l[i] * l[j];
      }
    } else {
      if (!boxes_overlap(triangle_bbox(t), wbox)) return;
      // 16 sub-triangles from two levels of midpoint refinement.
      constexpr int kDiv = 4;
      bool any = false;
      for (int a = 0; a < kDiv; ++a) {
        for (int b = 0; a + b < kDiv; ++b) {
          // Upward sub-triangle with corner (a, b) and, when it fits, the
          // downward one sharing its hypotenuse.
          for (int flip = 0; flip < 2; ++flip) {
            if (flip == 1 && a + b + 1 >= kDiv) continue;
            double c[3][2];
            if (flip == 0) {
              c[0][0] = a; c[0][1] = b;
              c[1][0] = a + 1; c[1][1] = b;
              c[2][0] = a; c[2][1] = b + 1;
            } else {
              c[0][0] = a + 1; c[0][1] = b;
              c[1][0] = a + 1; c[1][1] = b + 1;
              c[2][0] = a; c[2][1] = b + 1;
            }
            for (const auto& q : quad::kTriangleDeg2Interior) {
              const double s1 = (q.l0 * c[0][0] + q.l1 * c[1][0] + q.l2 * c[2][0]) / kDiv;
              const double s2 = (q.l0 * c[0][1] + q.l1 * c[1][1] + q.l2 * c[2][1]) / kDiv;
              const double l[3] = {1.0 - s1 - s2, s1, s2};
              const Point x = at_bary(t, l[0], l[1], l[2]);
              if (!window->contains_closed(x)) continue;
              any = true;
              const double gw = q.w / (kDiv * kDiv) * density(x);
              for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) local[i][j] += gw * l[i] * l[j];
            }
          }
        }
      }
      if (!any) return;
    }
    for (auto& row : local)
      for (double& v : row) v *= t.area;
    scatter(m, t, local);
  });
}

void for_each_segment_piece(const Grid& g, Point p0, Point p1, const SegmentPieceFn& fn) {
  const Point d = p1 - p0;
  const double len = norm(d);
  if (len == 0.0) return;
  auto [t_lo, t_hi] = [&] {
    const auto iv = clip_segment(g.extent(), p0, p1);
    return iv.empty() ? std::pair{1.0, 0.0} : iv.front();
  }();
  if (t_lo >= t_hi) return;

  const double s = g.spacing();
  const Point o = g.origin();
  std::vector<double> ts{t_lo, t_hi};
  auto add_lines = [&](double start, double delta, double origin) {
    if (delta == 0.0) return;
    const double a = (start + t_lo * delta - origin) / s, b = (start + t_hi * delta - origin) / s;
    for (long long k = static_cast<long long>(std::ceil(std::min(a, b)));
         k <= static_cast<long long>(std::floor(std::max(a, b))); ++k) {
      const double t = (origin + static_cast<double>(k) * s - start) / delta;
      if (t > t_lo && t < t_hi) ts.push_back(t);
    }
  };
  add_lines(p0.x, d.x, o.x);
  add_lines(p0.y, d.y, o.y);
  std::sort(ts.begin(), ts.end());

  auto emit = [&](double ta, double tb) {
    if (tb - ta <= 1e-14) return;
    const Point mid = p0 + (0.5 * (ta + tb)) * d;
    const auto loc = g.locate(mid);
    const Point q0 = g.node(loc.nodes[0]), q1 = g.node(loc.nodes[1]), q2 = g.node(loc.nodes[2]);
    const double det = (q1.x - q0.x) * (q2.y - q0.y) - (q1.y - q0.y) * (q2.x - q0.x);
    auto bary = [&](Point x) {
      const double l1 = ((x.x - q0.x) * (q2.y - q0.y) - (x.y - q0.y) * (q2.x - q0.x)) / det;
      const double l2 = ((q1.x - q0.x) * (x.y - q0.y) - (q1.y - q0.y) * (x.x - q0.x)) / det;
      return std::array<double, 3>{1.0 - l1 - l2, l1, l2};
    };
    fn(loc.nodes, bary(p0 + ta * d), bary(p0 + tb * d), (tb - ta) * len);
  };

  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double ta = ts[k], tb = ts[k + 1];
    if (tb - ta <= 1e-14) continue;
    // Split at the crossing with this cell's diagonal.
    const Point mid = p0 + (0.5 * (ta + tb)) * d;
    const double fx = (mid.x - o.x) / s, fy = (mid.y - o.y) / s;
    const auto ci = static_cast<std::size_t>(std::clamp(std::floor(fx), 0.0, static_cast<double>(g.cells_x() - 1)));
    const auto cj = static_cast<std::size_t>(std::clamp(std::floor(fy), 0.0, static_cast<double>(g.cells_y() - 1)));
    auto diag = [&](double t) {
      const Point x = p0 + t * d;
      const double u = (x.x - o.x) / s - static_cast<double>(ci);
      const double v = (x.y - o.y) / s - static_cast<double>(cj);
      return g.rising_diagonal(ci, cj) ? u - v : u + v - 1.0;
    };
    const double fa = diag(ta), fb = diag(tb);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      const double tc = ta + (tb - ta) * fa / (fa - fb);
      emit(ta, tc);
      emit(tc, tb);
    } else {
      emit(ta, tb);
    }
  }
}

void add_segment_mass(StencilMatrix& m, const Grid& g, std::span<const SegmentMeasure> segments,
                      const Region* window) {
  const auto& rule = quad::GaussRule<4>::get();
  for (const auto& seg : segments) {
    if (seg.density == 0.0) continue;
    Intervals parts = window != nullptr ? window->clip(seg.p0, seg.p1) : Intervals{{0.0, 1.0}};
    const Point d = seg.p1 - seg.p0;
    for (const auto& [ta, tb] : parts) {
      for_each_segment_piece(g, seg.p0 + ta * d, seg.p0 + tb * d,
                             [&](const std::array<std::size_t, 3>& nodes, const std::array<double, 3>& w0,
                                 const std::array<double, 3>& w1, double length) {
                               double local[3][3] = {};
                               for (std::size_t q = 0; q < 4; ++q) {
                                 const double s = 0.5 * (1.0 + rule.nodes[q]);
                                 double l[3];
                                 for (int i = 0; i < 3; ++i) l[i] = (1.0 - s) * w0[i] + s * w1[i];
                                 const double wq = 0.5 * rule.weights[q] * length * seg.density;
                                 for (int i = 0; i < 3; ++i)
                                   for (int j = 0; j < 3; ++j) local[i][j] += wq * l[i] * l[j];
                               }
                               for (int a = 0; a < 3; ++a) {
                                 m.add(nodes[a], nodes[a], local[a][a]);
                                 for (int b = a + 1; b < 3; ++b) m.add(nodes[a], nodes[b], local[a][b]);
                               }
                             });
    }
  }
}

StencilMatrix assemble_measure_mass(const Grid& g, const MeasureSpec& mu, const Region* window) {
  if (mu.has_atoms()) {
    throw ValidationError("measure has atoms: points carry zero capacity, so atoms are not admissible here");
  }
  StencilMatrix m(g.nx(), g.ny());
  add_density_mass(m, g, mu.density, window);
  add_segment_mass(m, g, mu.segments, window);
  return m;
}

std::vector<double> assemble_load(const Grid& g, const std::function<double(Point)>& f) {
  std::vector<double> b(g.size(), 0.0);
  for_each_triangle(g, [&](const Triangle& t) {
    for (const auto& q : quad::kTriangleDeg4) {
      const double fw = q.w * t.area * f(at_bary(t, q.l0, q.l1, q.l2));
      b[t.nodes[0]] += fw * q.l0;
      b[t.nodes[1]] += fw * q.l1;
      b[t.nodes[2]] += fw * q.l2;
    }
  });
  return b;
}

}  // namespace perfolab
