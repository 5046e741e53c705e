#include "perfolab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perfolab/errors.hpp"
#include "perfolab/quadrature.hpp"

namespace perfolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double raw_density(const DensityKind& kind, Point p) {
  return std::visit(
      Overloaded{
          [](const ZeroDensity&) { return 0.0; },
          [](const ConstantDensity& c) { return c.value; },
          [&](const RadialDensity& r) {
            const double d = distance(p, r.center);
            return r.exponent == 0.0 ? r.value : r.value * std::pow(d, r.exponent);
          },
          [&](const CheckerboardDensity& c) {
            const auto ix = static_cast<long long>(std::floor(c.k * p.x));
            const auto iy = static_cast<long long>(std::floor(c.k * p.y));
            return ((ix + iy) % 2 == 0) ? c.a : c.b;
          },
      },
      kind);
}

std::vector<double> lattice_breaks(int k, double lo, double hi) {
  std::vector<double> out;
  if (k <= 0) return out;
  const long long first = static_cast<long long>(std::ceil(lo * k));
  for (long long j = first; static_cast<double>(j) / k < hi; ++j) {
    const double t = static_cast<double>(j) / k;
    if (t > lo) out.push_back(t);
  }
  return out;
}

std::vector<double> with_breaks(double lo, double hi, std::vector<double> inner) {
  std::vector<double> pts{lo};
  std::sort(inner.begin(), inner.end());
  for (double t : inner) {
    if (t > pts.back() && t < hi) pts.push_back(t);
  }
  pts.push_back(hi);
  return pts;
}

double tensor_gauss(const Density& g, const Rect& q, int cells) {
  const auto& rule = quad::GaussRule<8>::get();
  const double hx = q.width() / cells, hy = q.height() / cells;
  double total = 0.0;
  for (int cj = 0; cj < cells; ++cj) {
    const double ymid = q.y0 + (cj + 0.5) * hy;
    for (int ci = 0; ci < cells; ++ci) {
      const double xmid = q.x0 + (ci + 0.5) * hx;
      double s = 0.0;
      for (std::size_t a = 0; a < 8; ++a) {
        const double y = ymid + 0.5 * hy * rule.nodes[a];
        double row = 0.0;
        for (std::size_t b = 0; b < 8; ++b) {
          row += rule.weights[b] * g(Point{xmid + 0.5 * hx * rule.nodes[b], y});
        }
        s += rule.weights[a] * row;
      }
      total += s;
    }
  }
  return total * 0.25 * hx * hy;
}

double refine_piece(const Density& g, const Rect& q) {
  constexpr int kMaxLevel = 7;
  constexpr double kRelTol = 1e-10;
  double prev = tensor_gauss(g, q, 1);
  for (int level = 1; level <= kMaxLevel; ++level) {
    const double cur = tensor_gauss(g, q, 1 << level);
    if (std::abs(cur - prev) <= kRelTol * std::abs(cur)) return cur;
    if (cur == 0.0 && prev == 0.0) return 0.0;
    prev = cur;
  }
  return prev;
}

void require_inside(const Rect& domain, Point p, const std::string& what) {
  if (!domain.contains_open(p)) {
    std::ostringstream os;
    os << what << " (" << p.x << ", " << p.y << ") outside domain";
    throw ValidationError(os.str());
  }
}

}  // namespace

double Density::operator()(Point p) const { return std::min(raw_density(kind, p), cap); }

bool Density::is_zero() const {
  if (cap <= 0.0) return true;
  return std::visit(Overloaded{
                        [](const ZeroDensity&) { return true; },
                        [](const ConstantDensity& c) { return c.value == 0.0; },
                        [](const RadialDensity& r) { return r.value == 0.0; },
                        [](const CheckerboardDensity& c) { return c.a == 0.0 && c.b == 0.0; },
                    },
                    kind);
}

std::vector<double> Density::x_breaks(double lo, double hi) const {
  if (const auto* c = std::get_if<CheckerboardDensity>(&kind)) return lattice_breaks(c->k, lo, hi);
  if (const auto* r = std::get_if<RadialDensity>(&kind)) {
    if (r->center.x > lo && r->center.x < hi) return {r->center.x};
  }
  return {};
}

std::vector<double> Density::y_breaks(double lo, double hi) const {
  if (const auto* c = std::get_if<CheckerboardDensity>(&kind)) return lattice_breaks(c->k, lo, hi);
  if (const auto* r = std::get_if<RadialDensity>(&kind)) {
    if (r->center.y > lo && r->center.y < hi) return {r->center.y};
  }
  return {};
}

std::string Density::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const ZeroDensity&) { os << "zero"; },
                 [&](const ConstantDensity& c) { os << "constant(" << c.value << ")"; },
                 [&](const RadialDensity& r) {
                   os << "radial(" << r.value << ", " << r.center.x << ", " << r.center.y << ", "
                      << r.exponent << ")";
                 },
                 [&](const CheckerboardDensity& c) {
                   os << "checkerboard(" << c.a << ", " << c.b << ", " << c.k << ")";
                 },
             },
             kind);
  if (std::isfinite(cap)) os << " min " << cap;
  return os.str();
}

void MeasureSpec::validate() const {
  if (domain.empty()) throw ValidationError("empty domain rectangle");
  const bool ok = std::visit(
      Overloaded{
          [](const ZeroDensity&) { return true; },
          [](const ConstantDensity& c) { return c.value >= 0.0 && std::isfinite(c.value); },
          [](const RadialDensity& r) {
            return r.value >= 0.0 && std::isfinite(r.value) && r.exponent >= 0.0;
          },
          [](const CheckerboardDensity& c) {
            return c.a >= 0.0 && c.b >= 0.0 && std::isfinite(c.a) && std::isfinite(c.b) && c.k >= 1;
          },
      },
      density.kind);
  if (!ok || !(density.cap >= 0.0)) {
    throw ValidationError("density parameters must be finite and nonnegative: " + density.describe());
  }
  for (const auto& a : atoms) {
    require_inside(domain, a.position, "atom");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw ValidationError("atom mass must be positive");
  }
  for (const auto& s : segments) {
    require_inside(domain, s.p0, "segment endpoint");
    require_inside(domain, s.p1, "segment endpoint");
    if (!(s.density >= 0.0) || !std::isfinite(s.density)) {
      throw ValidationError("segment density must be nonnegative");
    }
  }
}

bool MeasureSpec::is_zero() const {
  if (!density.is_zero() || !atoms.empty()) return false;
  return std::all_of(segments.begin(), segments.end(), [](const SegmentMeasure& s) {
    return s.density == 0.0 || s.length() == 0.0;
  });
}

Rect Box::rect() const {
  const double s = 1.0 / level;
  return {i1 * s, i2 * s, (i1 + 1) * s, (i2 + 1) * s};
}

double density_integral(const Density& g, const Rect& q) {
  if (q.empty() || g.is_zero()) return 0.0;
  if (const auto* c = std::get_if<ConstantDensity>(&g.kind)) {
    return std::min(c->value, g.cap) * q.area();
  }
  const auto xs = with_breaks(q.x0, q.x1, g.x_breaks(q.x0, q.x1));
  const auto ys = with_breaks(q.y0, q.y1, g.y_breaks(q.y0, q.y1));
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      total += refine_piece(g, Rect{xs[i], ys[j], xs[i + 1], ys[j + 1]});
    }
  }
  return total;
}

double mass_on_rect(const MeasureSpec& mu, const Rect& q) {
  double m = density_integral(mu.density, intersect(q, mu.domain));
  for (const auto& a : mu.atoms) {
    if (q.contains_half_open(a.position)) m += a.mass;
  }
  for (const auto& s : mu.segments) {
    if (s.density == 0.0) continue;
    const Point d = s.p1 - s.p0;
    for (const auto& [t0, t1] : clip_segment(q, s.p0, s.p1)) {
      const Point a = s.p0 + t0 * d;
      const Point b = s.p0 + t1 * d;
      // Pieces lying in an upper face belong to the neighbouring cube.
      if ((a.x == q.x1 && b.x == q.x1) || (a.y == q.y1 && b.y == q.y1)) continue;
      m += s.density * distance(a, b);
    }
  }
  return m;
}

double mass_on_box(const MeasureSpec& mu, const Box& box) { return mass_on_rect(mu, box.rect()); }

double total_mass(const MeasureSpec& mu) {
  const Rect& d = mu.domain;
  // Slightly enlarged so nothing sits on an excluded upper face.
  const double pad = 1e-9 * std::max(d.width(), d.height());
  return mass_on_rect(mu, Rect{d.x0, d.y0, d.x1 + pad, d.y1 + pad});
}

Decomposition decompose(const MeasureSpec& mu) {
  Decomposition out;
  out.mu0 = MeasureSpec{mu.domain, mu.density, {}, mu.segments};
  out.mu1 = MeasureSpec{mu.domain, {}, mu.atoms, {}};
  return out;
}

MeasureSpec truncate_density(const MeasureSpec& mu, double k) {
  if (!(k > 0.0)) throw ValidationError("truncation level must be positive");
  MeasureSpec out = mu;
  out.density.cap = std::min(out.density.cap, k);
  return out;
}

// Kato norm ------------------------------------------------------------------

namespace {

double kernel(int n, double diam, double r) {
  return n == 2 ? std::log(diam / r) : 1.0 / r;
}

/// Panels on [0, 1] graded geometrically towards 0.
std::vector<double> graded_panels(int count) {
  std::vector<double> t{0.0};
  for (int k = count - 1; k >= 0; --k) t.push_back(std::ldexp(1.0, -k));
  return t;
}

/// Integral over the triangle (x, p1, p2) of K(|y - x|) g(y) via the Duffy map
/// y = x + u((1 - v)(p1 - x) + v(p2 - x)), which absorbs the singularity at x.
double duffy_triangle(const Density& g, int n, double diam, Point x, Point p1, Point p2) {
  const Point e1 = p1 - x, e2 = p2 - x;
  const double jac = std::abs(e1.x * e2.y - e1.y * e2.x);
  if (jac == 0.0) return 0.0;
  const auto& rule = quad::GaussRule<8>::get();
  static const std::vector<double> u_panels = graded_panels(10);
  constexpr int kVPanels = 2;
  double total = 0.0;
  for (int pv = 0; pv < kVPanels; ++pv) {
    const double va = static_cast<double>(pv) / kVPanels, vb = static_cast<double>(pv + 1) / kVPanels;
    total += rule.integrate(
        [&](double v) {
          const Point dir = (1.0 - v) * e1 + v * e2;
          const double len = norm(dir);
          double acc = 0.0;
          for (std::size_t k = 0; k + 1 < u_panels.size(); ++k) {
            acc += rule.integrate(
                [&](double u) {
                  const Point y = x + u * dir;
                  return u * kernel(n, diam, u * len) * g(y);
                },
                u_panels[k], u_panels[k + 1]);
          }
          return acc;
        },
        va, vb);
  }
  return total * jac;
}

double density_potential(const Density& g, const Rect& a, int n, double diam, Point x) {
  if (g.is_zero() || a.empty()) return 0.0;
  const Point c[4] = {{a.x0, a.y0}, {a.x1, a.y0}, {a.x1, a.y1}, {a.x0, a.y1}};
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += duffy_triangle(g, n, diam, x, c[k], c[(k + 1) % 4]);
  return total;
}

double segment_potential(const SegmentMeasure& s, const Rect& a, int n, double diam, Point x) {
  const auto& rule = quad::GaussRule<8>::get();
  const Point d = s.p1 - s.p0;
  const double len = s.length();
  if (len == 0.0 || s.density == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& [t0, t1] : clip_segment(a, s.p0, s.p1)) {
    // Split at the foot of the perpendicular and grade towards it.
    const double tf = std::clamp(((x.x - s.p0.x) * d.x + (x.y - s.p0.y) * d.y) / (len * len), t0, t1);
    static const std::vector<double> panels = graded_panels(12);
    for (const auto& [lo, hi] : {std::pair{tf, t1}, std::pair{tf, t0}}) {
      if (lo == hi) continue;
      for (std::size_t k = 0; k + 1 < panels.size(); ++k) {
        const double ta = lo + panels[k] * (hi - lo), tb = lo + panels[k + 1] * (hi - lo);
        total += std::abs(rule.integrate(
            [&](double t) {
              const double r = distance(x, s.p0 + t * d);
              return kernel(n, diam, r);
            },
            ta, tb));
      }
    }
  }
  return total * len * s.density;
}

}  // namespace

double kato_potential(const MeasureSpec& mu, const Rect& region, int n, Point x) {
  if (n != 2 && n != 3) throw ValidationError("kato_norm: dimension must be 2 or 3");
  const Rect a = intersect(region, mu.domain);
  const double diam = region.diameter();
  double v = density_potential(mu.density, a, n, diam, x);
  for (const auto& s : mu.segments) v += segment_potential(s, a, n, diam, x);
  if (n == 2) v += mass_on_rect(mu, region);
  return v;
}

double kato_norm(const MeasureSpec& mu, const Rect& region, int n) {
  if (n != 2 && n != 3) throw ValidationError("kato_norm: dimension must be 2 or 3");
  for (const auto& at : mu.atoms) {
    if (region.contains_half_open(at.position)) return std::numeric_limits<double>::infinity();
  }
  if (mu.is_zero() || region.empty()) return 0.0;
  double prev = -1.0;
  constexpr int kMaxRefine = 6;
  for (int k = 2; k <= kMaxRefine; ++k) {
    const int pts = (1 << k) + 1;
    double best = 0.0;
    for (int j = 0; j < pts; ++j) {
      for (int i = 0; i < pts; ++i) {
        const Point x{region.x0 + region.width() * i / (pts - 1),
                      region.y0 + region.height() * j / (pts - 1)};
        best = std::max(best, kato_potential(mu, region, n, x));
      }
    }
    if (prev >= 0.0 && std::abs(best - prev) < 0.01 * best) return best;
    prev = best;
  }
  return prev;
}

}  // namespace perfolab
