#include "perfolab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>

#include "perfolab/assembly.hpp"
#include "perfolab/cg.hpp"
#include "perfolab/corpus.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/kernels.hpp"

namespace perfolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCapacitySolveTol = 1e-12;

Grid condenser_grid(const Region& u, const CapacityMesh& mesh) {
  if (!(mesh.spacing > 0.0)) throw ValidationError("capacity mesh spacing must be positive");
  const Rect box = u.bbox();
  return Grid::covering(box, mesh.spacing, mesh.anchor.value_or(box.center()));
}

void require_resolved(const Region& v, double spacing) {
  auto check = [&](double across) {
    if (across < 4.0 * spacing * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "inner set under-resolved: " << across / spacing << " cells across, need at least 4";
      throw ValidationError(os.str());
    }
  };
  if (const auto* d = v.as_disk()) {
    if (d->radius > 0.0) check(2.0 * d->radius);
  } else if (const auto* r = v.as_rect()) {
    if (!r->empty()) check(std::min(r->width(), r->height()));
  } else {
    for (const auto& d : *v.as_union()) {
      if (d.radius > 0.0) check(2.0 * d.radius);
    }
  }
}

void require_condenser(const Region& v, const Region& u) {
  if (!v.compactly_inside(u)) throw ValidationError("condenser plate must lie compactly inside the container");
}

/// Non-strict containment E subset of closure(A).
bool within(const Region& e, const Region& a) {
  constexpr double eps = 1e-12;
  if (e.is_empty()) return true;
  auto disk_in = [&](const Disk& d) {
    if (const auto* ad = a.as_disk()) return distance(d.center, ad->center) + d.radius <= ad->radius + eps;
    const Rect& ar = *a.as_rect();
    const Rect b = d.bbox();
    return b.x0 >= ar.x0 - eps && b.x1 <= ar.x1 + eps && b.y0 >= ar.y0 - eps && b.y1 <= ar.y1 + eps;
  };
  if (a.as_union() != nullptr) throw ValidationError("container must be a disk or a rectangle");
  if (const auto* d = e.as_disk()) return disk_in(*d);
  if (const auto* u = e.as_union()) return std::all_of(u->begin(), u->end(), disk_in);
  const Rect& r = *e.as_rect();
  if (const auto* ar = a.as_rect()) {
    return r.x0 >= ar->x0 - eps && r.x1 <= ar->x1 + eps && r.y0 >= ar->y0 - eps && r.y1 <= ar->y1 + eps;
  }
  const Disk& ad = *a.as_disk();
  const Point corners[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x0, r.y1}, {r.x1, r.y1}};
  return std::all_of(std::begin(corners), std::end(corners),
                     [&](Point c) { return distance(c, ad.center) <= ad.radius + eps; });
}

struct CondenserSolution {
  Grid grid;
  StencilMatrix k;
  std::vector<double> w;
  std::vector<unsigned char> inner, outer;
};

CondenserSolution solve_condenser(const Region& v, const Region& u, const EllipticOperator& op,
                                  const CapacityMesh& mesh) {
  if (u.as_union() != nullptr) throw ValidationError("container must be a disk or a rectangle");
  require_condenser(v, u);
  require_resolved(v, mesh.spacing);
  CondenserSolution s{condenser_grid(u, mesh), {}, {}, {}, {}};
  const std::size_t n = s.grid.size();
  s.inner.assign(n, 0);
  s.outer.assign(n, 0);
  std::vector<unsigned char> fixed(n, 0);
  std::vector<double> values(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Point x = s.grid.node(k);
    if (!u.contains_open(x)) {
      s.outer[k] = 1;
    } else if (v.contains_closed(x)) {
      s.inner[k] = 1;
      values[k] = 1.0;
    }
    fixed[k] = s.inner[k] | s.outer[k];
  }
  s.k = assemble_stiffness(s.grid, op);
  const std::vector<double> zero(n, 0.0);
  auto sol = solve_constrained(s.k, zero, fixed, values, CgOptions{kCapacitySolveTol, 0, true});
  s.w = std::move(sol.x);
  return s;
}

}  // namespace

double cap_concentric_closed_form(double rho, double r, int n) {
  if (n != 2 && n != 3) throw ValidationError("closed-form capacity: dimension must be 2 or 3");
  if (!(rho >= 0.0) || !(rho < r)) throw ValidationError("closed-form capacity requires 0 <= rho < r");
  if (rho == 0.0) return 0.0;
  if (n == 2) return 2.0 * kPi / std::log(r / rho);
  return 4.0 * kPi / (1.0 / rho - 1.0 / r);
}

double cap_variational(const Region& v, const Region& u, const EllipticOperator& op, const CapacityMesh& mesh) {
  const auto s = solve_condenser(v, u, op, mesh);
  return s.k.quadratic_form(s.w);
}

double mu_capacity(const Region& e, const Region& a, const MeasureSpec& mu, const EllipticOperator& op,
                   const CapacityMesh& mesh, bool infinite_on_e) {
  if (a.as_union() != nullptr) throw ValidationError("container must be a disk or a rectangle");
  if (!within(e, a)) throw ValidationError("mu-capacity: E must be contained in A");
  if (infinite_on_e) return e.is_empty() ? 0.0 : cap_variational(e, a, op, mesh);
  for (const auto& at : mu.atoms) {
    if (e.contains_closed(at.position)) throw ValidationError("mu-capacity: measure has atoms on E");
  }
  const Grid grid = condenser_grid(a, mesh);
  const std::size_t n = grid.size();
  const StencilMatrix k = assemble_stiffness(grid, op);
  const StencilMatrix m = assemble_measure_mass(grid, MeasureSpec{mu.domain, mu.density, {}, mu.segments}, &e);

  std::vector<unsigned char> outer(n, 0);
  for (std::size_t i = 0; i < n; ++i) outer[i] = a.contains_open(grid.node(i)) ? 0 : 1;
  const std::vector<double> ones(n, 1.0), zero(n, 0.0);
  std::vector<double> rhs(n);
  m.apply(ones, rhs);

  StencilMatrix system = k;
  system += m;
  const auto sol = solve_constrained(system, rhs, outer, zero, CgOptions{kCapacitySolveTol, 0, true});
  std::vector<double> defect(n);
  for (std::size_t i = 0; i < n; ++i) defect[i] = 1.0 - sol.x[i];
  return k.quadratic_form(sol.x) + m.quadratic_form(defect);
}

double CapacitaryPotential::gamma_mass() const {
  double s = 0.0;
  for (double g : gamma) s += g;
  return s;
}

double CapacitaryPotential::nu_mass() const {
  double s = 0.0;
  for (double v : nu) s += v;
  return s;
}

CapacitaryPotential capacitary_potential(const Region& v, const Region& u, const EllipticOperator& op,
                                         const CapacityMesh& mesh) {
  auto s = solve_condenser(v, u, op, mesh);
  const std::size_t n = s.grid.size();
  std::vector<double> kw(n);
  s.k.apply(s.w, kw);
  CapacitaryPotential pot;
  pot.gamma.assign(n, 0.0);
  pot.nu.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (s.inner[k]) pot.gamma[k] = kw[k];
    if (s.outer[k]) pot.nu[k] = -kw[k];
  }
  pot.cap_value = kernels::active().dot(s.w.data(), kw.data(), n);
  for (double& x : s.w) x = std::clamp(x, 0.0, 1.0);
  pot.w = Field(s.grid, std::move(s.w));
  pot.inner = std::move(s.inner);
  pot.outer = std::move(s.outer);
  return pot;
}

double boundary_average(const Field& u, const CapacitaryPotential& pot) {
  if (!u.grid.same_layout(pot.w.grid)) throw ValidationError("boundary_average: field is not on the potential's mesh");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < pot.nu.size(); ++k) {
    num += u.values[k] * pot.nu[k];
    den += pot.nu[k];
  }
  if (!(den > 0.0)) throw NumericalError("boundary_average: outer distribution has zero mass");
  return num / den;
}

// Log-polar condenser ----------------------------------------------------------

namespace {

constexpr std::size_t kRadialCells = 64;
constexpr std::size_t kAngularCells = 128;

}  // namespace

namespace {

/// Annular capacity as a function of the log ratio L = ln(r / rho), so that
/// radii far below the smallest double remain meaningful.
double annular_capacity_log(double log_ratio, double r, const EllipticOperator& op, Point center) {
  const std::size_t ns = kRadialCells, nt = kAngularCells;
  const double s0 = std::log(r) - log_ratio, ds = log_ratio / static_cast<double>(ns);
  const double dt = 2.0 * kPi / static_cast<double>(nt);

  // Node (i, j), i = 0..ns radial, j periodic. Unknowns are rings 1..ns-1.
  auto node_value_fixed = [&](std::size_t i) { return i == 0 ? 1.0 : 0.0; };
  const std::size_t rows = (ns - 1) * nt;
  auto row_of = [&](std::size_t i, std::size_t j) { return (i - 1) * nt + j; };

  // 9-neighbour periodic pattern: slot (di + 1) * 3 + (dj + 1).
  std::vector<double> coef(rows * 9, 0.0);
  std::vector<double> rhs(rows, 0.0);
  auto slot = [&](std::size_t i, std::size_t j, std::size_t i2, std::size_t j2) {
    const int di = static_cast<int>(i2) - static_cast<int>(i);
    int dj = static_cast<int>(j2) - static_cast<int>(j);
    if (dj > 1) dj -= static_cast<int>(nt);
    if (dj < -1) dj += static_cast<int>(nt);
    return row_of(i, j) * 9 + static_cast<std::size_t>((di + 1) * 3 + (dj + 1));
  };

  struct Tri {
    std::size_t i[3], j[3];
  };
  std::vector<std::pair<Tri, std::array<std::array<double, 3>, 3>>> elements;
  elements.reserve(ns * nt * 2);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t jn = (j + 1) % nt;
      Tri t1, t2;
      if (((i + j) & 1U) == 0U) {
        t1 = {{i, i + 1, i + 1}, {j, j, jn}};
        t2 = {{i, i + 1, i}, {j, jn, jn}};
      } else {
        t1 = {{i, i + 1, i}, {j, j, jn}};
        t2 = {{i + 1, i + 1, i}, {j, jn, jn}};
      }
      for (const Tri& t : {t1, t2}) {
        // Local coordinates in (s, theta); theta unwrapped relative to j.
        double ps[3], pt[3];
        for (int a = 0; a < 3; ++a) {
          ps[a] = s0 + static_cast<double>(t.i[a]) * ds;
          const double jj = (t.j[a] == jn && jn != j) || (jn == 0 && t.j[a] == 0 && j == nt - 1)
                                ? static_cast<double>(j + 1)
                                : static_cast<double>(j);
          pt[a] = jj * dt;
        }
        const double area2 = (ps[1] - ps[0]) * (pt[2] - pt[0]) - (pt[1] - pt[0]) * (ps[2] - ps[0]);
        const double area = 0.5 * std::abs(area2);
        const double gs[3] = {(pt[1] - pt[2]) / area2, (pt[2] - pt[0]) / area2, (pt[0] - pt[1]) / area2};
        const double gt[3] = {(ps[2] - ps[1]) / area2, (ps[0] - ps[2]) / area2, (ps[1] - ps[0]) / area2};
        const double sc = (ps[0] + ps[1] + ps[2]) / 3.0, tc = (pt[0] + pt[1] + pt[2]) / 3.0;
        const double c = std::cos(tc), sn = std::sin(tc);
        const Sym2 a = op.at(center + std::exp(sc) * Point{c, sn});
        // R^T A R with R the rotation by theta.
        const double b11 = c * (a.a11 * c + a.a12 * sn) + sn * (a.a12 * c + a.a22 * sn);
        const double b12 = c * (-a.a11 * sn + a.a12 * c) + sn * (-a.a12 * sn + a.a22 * c);
        const double b22 = -sn * (-a.a11 * sn + a.a12 * c) + c * (-a.a12 * sn + a.a22 * c);
        std::array<std::array<double, 3>, 3> local{};
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) {
            local[p][q] = area * (b11 * gs[p] * gs[q] + b12 * (gs[p] * gt[q] + gt[p] * gs[q]) + b22 * gt[p] * gt[q]);
          }
        }
        elements.emplace_back(t, local);
      }
    }
  }

  for (const auto& [t, local] : elements) {
    for (int p = 0; p < 3; ++p) {
      const std::size_t ip = t.i[p];
      if (ip == 0 || ip == ns) continue;
      for (int q = 0; q < 3; ++q) {
        const std::size_t iq = t.i[q];
        if (iq == 0 || iq == ns) {
          rhs[row_of(ip, t.j[p])] -= local[p][q] * node_value_fixed(iq);
        } else {
          coef[slot(ip, t.j[p], iq, t.j[q])] += local[p][q];
        }
      }
    }
  }

  // The cells get very elongated for extreme targets (ln(r/rho) spans many
  // orders of magnitude), which stalls iterative solvers; the system is small,
  // so factor it.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(rows * 9);
  for (std::size_t i = 1; i < ns; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t row = row_of(i, j);
      for (int di = -1; di <= 1; ++di) {
        const std::size_t i2 = i + static_cast<std::size_t>(di + 1) - 1;
        if (i2 == 0 || i2 == ns) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          const double v = coef[row * 9 + static_cast<std::size_t>((di + 1) * 3 + (dj + 1))];
          if (v == 0.0) continue;
          const std::size_t j2 = (j + nt + static_cast<std::size_t>(dj + 1) - 1) % nt;
          trip.emplace_back(static_cast<int>(row), static_cast<int>(row_of(i2, j2)), v);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("annular capacity: factorization failed");
  const Eigen::VectorXd sol = ldlt.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rows)));
  if (ldlt.info() != Eigen::Success || !sol.allFinite()) throw NumericalError("annular capacity: solve failed at ln(r/rho) = " + std::to_string(log_ratio));
  const std::vector<double> x(sol.data(), sol.data() + sol.size());

  auto value = [&](std::size_t i, std::size_t j) { return (i == 0 || i == ns) ? node_value_fixed(i) : x[row_of(i, j)]; };
  double energy = 0.0;
  for (const auto& [t, local] : elements) {
    const double u[3] = {value(t.i[0], t.j[0]), value(t.i[1], t.j[1]), value(t.i[2], t.j[2])};
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) energy += u[p] * local[p][q] * u[q];
  }
  return energy;
}

}  // namespace

double annular_capacity(double rho, double r, const EllipticOperator& op, Point center) {
  if (!(rho >= 0.0) || !(rho < r)) throw ValidationError("annular capacity requires 0 <= rho < r");
  if (rho == 0.0) return 0.0;
  return annular_capacity_log(std::log(r) - std::log(rho), r, op, center);
}

double hole_radius(double target, double r, const EllipticOperator& op, double tol, Point center, int n) {
  if (std::isnan(target) || target < 0.0) throw ValidationError("hole_radius: target capacity must be nonnegative");
  if (std::isinf(target)) {
    throw ValidationError("hole_radius: infinite target (measure is not Radon); construction undefined");
  }
  if (!(r > 0.0)) throw ValidationError("hole_radius: outer radius must be positive");
  if (target == 0.0) return 0.0;
  if (op.is_laplace()) {
    if (n == 2) return r * std::exp(-2.0 * kPi / target);
    if (n == 3) return 1.0 / (4.0 * kPi / target + 1.0 / r);
    throw ValidationError("hole_radius: dimension must be 2 or 3");
  }
  if (n != 2) throw ValidationError("hole_radius: variable operators are supported in 2-D only");

  // cap ~ 2 pi tau with tau = 1 / ln(r / rho); ellipticity brackets tau.
  const double tau_max = 1.0 / -std::log1p(-1e-9);
  auto rho_of = [&](double tau) { return tau <= 0.0 ? 0.0 : r * std::exp(-1.0 / tau); };
  auto cap_of = [&](double tau) { return tau <= 0.0 ? 0.0 : annular_capacity_log(1.0 / tau, r, op, center); };
  const double scale = std::max(target, 1e-12);
  const double alpha = op.alpha();
  double lo = std::min(tau_max, 0.5 * alpha * target / (2.0 * kPi));
  double hi = std::min(tau_max, 2.0 * target / (2.0 * kPi * alpha));
  while (lo > 0.0 && cap_of(lo) > target) lo *= 0.5;
  if (lo < 1e-300) lo = 0.0;
  while (cap_of(hi) < target) {
    if (hi >= tau_max) throw NumericalError("hole_radius: target exceeds the capacity of any admissible hole");
    hi = std::min(tau_max, 2.0 * hi);
  }
  // Illinois-modified regula falsi on the bracket: cap is close to linear in
  // tau, so this needs a handful of evaluations where bisection needs ~25.
  double f_lo = (lo > 0.0 ? cap_of(lo) : 0.0) - target, f_hi = cap_of(hi) - target;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double f = cap_of(mid) - target;
    if (std::abs(f) <= tol * scale) return rho_of(mid);
    if (f < 0.0) {
      lo = mid;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * hi) return rho_of(0.5 * (lo + hi));
  }
  throw NumericalError("hole_radius: root search did not reach the requested tolerance");
}

double RadiusCache::radius(double target, double r, const EllipticOperator& op, double tol, Point center) {
  std::ostringstream key;
  key.precision(17);
  key << op.fingerprint() << '|' << r << '|' << target << '|' << tol;
  if (!op.is_constant()) key << '|' << center.x << ',' << center.y;
  const std::string k = key.str();
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  }
  const double rho = hole_radius(target, r, op, tol, center);
  std::unique_lock lock(mutex_);
  cache_.emplace(k, rho);
  return rho;
}

std::size_t RadiusCache::size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

double poincare_modulus_estimate(const MeasureSpec& mu, double r, Point center, const EllipticOperator& op,
                                 std::size_t corpus_size) {
  if (!(r > 0.0)) throw ValidationError("poincare_modulus_estimate: radius must be positive");
  const Rect cube = square_around(center, r);
  if (!mu.domain.compactly_contains(cube)) {
    throw ValidationError("poincare_modulus_estimate: cube must lie compactly inside the domain");
  }
  for (const auto& at : mu.atoms) {
    if (cube.contains_half_open(at.position)) {
      throw ValidationError("poincare_modulus_estimate: measure has atoms on the cube");
    }
  }
  const double mass = mass_on_rect(mu, cube);
  // With zero mass the numerator vanishes for any average; a reference
  // potential at r/4 keeps M defined.
  const double rho = mass > 0.0 ? hole_radius(mass, r, op, 1e-6, center) : 0.25 * r;

  constexpr std::size_t kMinCells = 64, kMaxCells = 512;
  std::size_t half_cells = kMinCells / 2;
  while (half_cells < kMaxCells / 2 && rho < 2.0 * r / static_cast<double>(half_cells)) half_cells *= 2;
  const double spacing = r / static_cast<double>(half_cells);
  if (rho < 2.0 * spacing) {
    throw NumericalError("poincare_modulus_estimate: hole radius too small to resolve on the cube mesh");
  }

  const CapacitaryPotential pot = capacitary_potential(Disk{center, rho}, Disk{center, r}, op, {spacing, center});
  const Grid& grid = pot.w.grid;
  const StencilMatrix grad = assemble_stiffness(grid, EllipticOperator::laplace());
  const Region window(cube);
  const StencilMatrix mass_mu = assemble_measure_mass(grid, MeasureSpec{mu.domain, mu.density, {}, mu.segments}, &window);

  double worst = 0.0;
  for (const auto& field : random_field_corpus(kReferenceCorpusSeed, corpus_size)) {
    Field u = interpolate(grid, field);
    const double avg = boundary_average(u, pot);
    const double dirichlet = grad.quadratic_form(u.values);
    for (double& v : u.values) v -= avg;
    const double num = mass_mu.quadratic_form(u.values);
    if (dirichlet <= 0.0) continue;
    worst = std::max(worst, std::sqrt(std::max(num, 0.0) / dirichlet));
  }
  return worst;
}

}  // namespace perfolab
