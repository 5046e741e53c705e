#include "perfolab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "perfolab/assembly.hpp"
#include "perfolab/calibration.hpp"
#include "perfolab/capacity.hpp"
#include "perfolab/corpus.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/pde.hpp"

namespace perfolab {

namespace {

constexpr double kPi = std::numbers::pi;

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 rng_;
};

struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  int config = -1;
  void update(double v, int k) {
    if (v > value) {
      value = v;
      config = k;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

MeasureSpec random_measure(Draw& d, int kind) {
  const Rect unit{0.0, 0.0, 1.0, 1.0};
  MeasureSpec mu = MeasureSpec::zero(unit);
  switch (kind % 4) {
    case 0:
      mu.density.kind = ConstantDensity{d.uniform(5.0, 300.0)};
      break;
    case 1:
      mu.density.kind = RadialDensity{d.uniform(20.0, 300.0), {d.uniform(0.3, 0.7), d.uniform(0.3, 0.7)},
                                      d.uniform(0.0, 2.0)};
      break;
    case 2:
      mu.density.kind = CheckerboardDensity{d.uniform(1.0, 50.0), d.uniform(50.0, 300.0), d.integer(2, 6)};
      break;
    default:
      mu.density.kind = ConstantDensity{d.uniform(5.0, 100.0)};
      mu.segments.push_back({{d.uniform(0.3, 0.45), d.uniform(0.3, 0.7)},
                             {d.uniform(0.55, 0.7), d.uniform(0.3, 0.7)},
                             d.uniform(1.0, 20.0)});
      break;
  }
  return mu;
}

EllipticOperator random_anisotropic(Draw& d) {
  const Sym2 a{d.uniform(1.0, 2.0), d.uniform(-0.3, 0.3), d.uniform(0.6, 1.5)};
  const double alpha = 0.999 * std::min(a.min_eig(), 1.0 / a.max_eig());
  return EllipticOperator(MatrixCoefficient{a}, alpha);
}

}  // namespace

std::vector<PropertyCheck> proposition_15_suite(std::uint64_t seed, int count, double tol) {
  Worst w2, w3, w4, w5, w6;
  bool ok1 = true;
  for (int k = 0; k < count; ++k) {
    Draw d(seed + static_cast<std::uint64_t>(k));
    const Point c{0.5, 0.5};
    const double big_r = d.uniform(0.3, 0.42);
    const Disk a{c, big_r}, b{c, big_r * d.uniform(1.1, 1.18)};
    const CapacityMesh mesh{big_r / 48.0, c};
    const MeasureSpec mu = random_measure(d, k);
    const EllipticOperator aniso = random_anisotropic(d);
    const EllipticOperator op = (k % 2 == 0) ? EllipticOperator::laplace() : aniso;

    // Plates E subset F inside A: disks, or boxes on every third config.
    const double rho = d.uniform(0.06, 0.1);
    const double off = big_r - 1.6 * rho - 0.02;
    const double ang = d.uniform(0.0, 2.0 * kPi);
    const Point pc = c + d.uniform(0.0, off) * Point{std::cos(ang), std::sin(ang)};
    Region e, f;
    if (k % 3 == 2) {
      e = Region(square_around(pc, rho / std::sqrt(2.0)));
      f = Region(square_around(pc, 1.5 * rho / std::sqrt(2.0)));
    } else {
      e = Region(Disk{pc, rho});
      f = Region(Disk{pc, 1.5 * rho});
    }
    auto cap = [&](const Region& set, const Region& cont, const EllipticOperator& o) {
      return mu_capacity(set, cont, mu, o, mesh);
    };
    const double ce = cap(e, a, op);

    // (i)
    if (cap(Region::empty_set(), a, op) != 0.0) ok1 = false;
    // (ii)
    w2.update(ce / cap(f, a, op) - 1.0, k);
    // (iii) two disjoint disks on opposite sides of the centre
    const double r3 = d.uniform(0.05, 0.08);
    const Disk d1{c + Point{-0.5 * big_r, 0.0}, r3}, d2{c + Point{0.5 * big_r, 0.0}, r3};
    const double c_union = cap(Region(std::vector<Disk>{d1, d2}), a, op);
    w3.update(c_union / (cap(Region(d1), a, op) + cap(Region(d2), a, op)) - 1.0, k);
    // (iv) larger container, common anchor
    w4.update(1.0 - ce / cap(e, b, op), k);
    // (v) ellipticity sandwich against the Laplacian
    const double lap = cap(e, a, EllipticOperator::laplace());
    const double ani = cap(e, a, aniso);
    const double al = aniso.alpha();
    w5.update(std::max(al * lap / ani - 1.0, ani / (lap / al) - 1.0), k);
    // (vi) E_j increasing to E
    double prev = 0.0, deficit = 0.0;
    if (const Disk* disk = e.as_disk()) {
      for (int j = 1; j <= 8; ++j) {
        const double cj = cap(Region(Disk{disk->center, disk->radius * (1.0 - std::ldexp(1.0, -j))}), a, op);
        deficit = std::max(deficit, prev / cj - 1.0);  // monotone
        prev = cj;
      }
    } else {
      const Rect& r = *e.as_rect();
      const Point cc = r.center();
      const double half = 0.5 * r.width();
      for (int j = 1; j <= 8; ++j) {
        const double cj = cap(Region(square_around(cc, half * (1.0 - std::ldexp(1.0, -j)))), a, op);
        deficit = std::max(deficit, prev / cj - 1.0);
        prev = cj;
      }
    }
    deficit = std::max(deficit, 1.0 - prev / ce);
    w6.update(deficit, k);
  }
  auto check = [&](const std::string& name, const Worst& w) {
    return PropertyCheck{name, w.value <= tol,
                         "worst relative violation " + fmt(std::max(0.0, w.value)) + " (config " +
                             std::to_string(w.config) + "), tolerance " + fmt(tol)};
  };
  return {
      PropertyCheck{"prop1.5(i) empty set", ok1, ok1 ? "exactly 0 on every config" : "nonzero capacity of the empty set"},
      check("prop1.5(ii) monotone in E", w2),
      check("prop1.5(iii) subadditive", w3),
      check("prop1.5(iv) antitone in A", w4),
      check("prop1.5(v) ellipticity sandwich", w5),
      check("prop1.5(vi) increasing limits", w6),
  };
}

std::vector<MeasureSpec> lemma_12_measures() {
  const Rect unit{0.0, 0.0, 1.0, 1.0};
  std::vector<MeasureSpec> out;
  out.push_back({unit, Density{ConstantDensity{200.0}}, {}, {}});
  out.push_back({unit, Density{RadialDensity{150.0, {0.5, 0.5}, 1.0}}, {}, {}});
  out.push_back({unit, Density{CheckerboardDensity{20.0, 300.0, 4}}, {}, {}});
  out.push_back({unit, Density{RadialDensity{50.0, {0.45, 0.55}, 0.5}, 120.0}, {}, {}});
  return out;
}

double lemma_12_ratio(std::size_t fields) {
  const Point c{0.5, 0.5};
  const double big_r = 0.4;
  const Rect a = square_around(c, 0.2);
  const Grid g = Grid::covering(Disk{c, big_r}.bbox(), 1.0 / 256.0, c);
  const StencilMatrix k = assemble_stiffness(g, EllipticOperator::laplace());
  const auto corpus = random_field_corpus(kReferenceCorpusSeed, fields);
  std::vector<Field> us;
  std::vector<double> grad;
  for (const auto& phi : corpus) {
    Field u = interpolate(g, [&](Point x) {
      const double t = 1.0 - (distance(x, c) / big_r) * (distance(x, c) / big_r);
      return t > 0.0 ? phi(x) * t : 0.0;
    });
    grad.push_back(k.quadratic_form(u.values));
    us.push_back(std::move(u));
  }
  const Region window(a);
  double worst = 0.0;
  for (const auto& mu : lemma_12_measures()) {
    const StencilMatrix m = assemble_measure_mass(g, mu, &window);
    const double kn = kato_norm(mu, a, 2);
    for (std::size_t i = 0; i < us.size(); ++i) {
      if (grad[i] <= 0.0) continue;
      worst = std::max(worst, m.quadratic_form(us[i].values) / (kn * grad[i]));
    }
  }
  return worst;
}

double lemma_22_ratio() {
  const Point c{0.5, 0.5};
  const double r = 0.25;
  const CapacityMesh mesh{r / 128.0, c};
  const auto corpus = random_field_corpus(kReferenceCorpusSeed, 2);
  const auto& base = corpus[1];
  auto phi = [&](Point x) { return base(x) * base(x) + 0.1; };
  const auto reference = capacitary_potential(Disk{c, r / 2.0}, Disk{c, r}, EllipticOperator::laplace(), mesh);
  const Field u = interpolate(reference.w.grid, phi);
  const double m_ref = boundary_average(u, reference);
  double worst = 0.0;
  for (double frac : {1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0}) {
    const auto pot = capacitary_potential(Disk{c, frac * r}, Disk{c, r}, EllipticOperator::laplace(), mesh);
    worst = std::max(worst, boundary_average(u, pot) / m_ref);
  }
  return worst;
}

double lemma_23_ratio(std::size_t fields) {
  const Point c{0.5, 0.5};
  const auto corpus = random_field_corpus(kReferenceCorpusSeed, fields);
  double worst = 0.0;
  for (double r : {0.2, 0.1, 0.05}) {
    const CapacityMesh mesh{r / 64.0, c};
    for (double frac : {0.5, 0.25, 0.125}) {
      const auto pot = capacitary_potential(Disk{c, frac * r}, Disk{c, r}, EllipticOperator::laplace(), mesh);
      const Grid& g = pot.w.grid;
      for (const auto& phi : corpus) {
        Field u = interpolate(g, phi);
        const double avg = boundary_average(u, pot);
        const double grad = field_metrics(u, Field(g, 0.0)).h1;
        if (grad <= 1e-14) continue;
        for (double& v : u.values) v -= avg;
        worst = std::max(worst, l2_norm(u) / (r * grad));
      }
    }
  }
  return worst;
}

bool SelftestSummary::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

std::string SelftestSummary::text() const {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    passed += c.passed ? 1 : 0;
  }
  os << passed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

SelftestSummary selftest() {
  SelftestSummary s;
  auto run = [&](const std::string& name, auto&& fn) {
    try {
      auto [ok, detail] = fn();
      s.checks.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      s.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };

  run("operator with alpha = 0 is rejected", [] {
    try {
      EllipticOperator(LaplaceCoefficient{}, 0.0);
    } catch (const ValidationError& e) {
      return std::pair{true, std::string("rejected: ") + e.what()};
    }
    return std::pair{false, std::string("constructed without error")};
  });

  run("closed-form capacity", [] {
    const double exact = cap_concentric_closed_form(0.25, 0.5);
    const double v = cap_variational(Disk{{0.5, 0.5}, 0.25}, Disk{{0.5, 0.5}, 0.5}, EllipticOperator::laplace(),
                                     {0.5 / 128.0, {}});
    const double rel = std::abs(v / exact - 1.0);
    return std::pair{rel <= 0.02, "relative error " + fmt(rel) + " (limit 0.02)"};
  });

  run("capacitary distributions balance", [] {
    double worst = 0.0;
    const EllipticOperator ops[2] = {EllipticOperator::laplace(), EllipticOperator::matrix(1.5, 0.2, 0.8, 0.6)};
    for (const auto& op : ops) {
      const auto p = capacitary_potential(Disk{{0.45, 0.5}, 0.1}, Disk{{0.5, 0.5}, 0.35}, op, {1.0 / 128.0, {}});
      worst = std::max({worst, std::abs(p.gamma_mass() / p.cap_value - 1.0),
                        std::abs(p.nu_mass() / p.cap_value - 1.0)});
    }
    return std::pair{worst <= 1e-8, "max relative mismatch " + fmt(worst)};
  });

  run("manufactured solutions", [] {
    const Rect dom{0.0, 0.0, 1.0, 1.0};
    const double c = 50.0;
    auto exact = [](Point p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
    const MeasureSpec mu{dom, Density{ConstantDensity{c}}, {}, {}};
    double e[2][2];
    for (int i = 0; i < 2; ++i) {
      const double s = i == 0 ? 1.0 / 32.0 : 1.0 / 64.0;
      e[0][i] = l2_error(solve_dirichlet(dom, EllipticOperator::laplace(),
                                         LoadSpec::product_sine(dom, 2.0 * kPi * kPi), s).u, exact);
      e[1][i] = l2_error(solve_relaxed(dom, mu, EllipticOperator::laplace(),
                                       LoadSpec::product_sine(dom, 2.0 * kPi * kPi + c), s).u, exact);
    }
    const double o1 = std::log2(e[0][0] / e[0][1]), o2 = std::log2(e[1][0] / e[1][1]);
    return std::pair{o1 >= 1.8 && o2 >= 1.8, "observed orders " + fmt(o1) + " (dirichlet), " + fmt(o2) + " (relaxed)"};
  });

  run("hole radius inverts capacity", [] {
    const auto op = EllipticOperator::matrix(1.6, 0.25, 0.9, 0.55);
    double worst = 0.0;
    for (double t : {0.1, 1.0, 100.0, 1e5}) {
      const double rho = hole_radius(t, 0.125, op);
      worst = std::max(worst, std::abs(annular_capacity(rho, 0.125, op) / t - 1.0));
    }
    return std::pair{worst <= 1e-6, "max relative mismatch " + fmt(worst)};
  });

  for (auto& c : proposition_15_suite(kReferenceCorpusSeed, 4)) s.checks.push_back(std::move(c));

  run("lemma 1.2 calibrated bound", [] {
    const double v = lemma_12_ratio(10);
    return std::pair{v <= calibration::kLemma12, "ratio " + fmt(v) + " <= " + fmt(calibration::kLemma12)};
  });
  run("lemma 2.2 calibrated bound", [] {
    const double v = lemma_22_ratio();
    return std::pair{v <= calibration::kLemma22, "ratio " + fmt(v) + " <= " + fmt(calibration::kLemma22)};
  });
  run("lemma 2.3 calibrated bound", [] {
    const double v = lemma_23_ratio(10);
    return std::pair{v <= calibration::kLemma23, "ratio " + fmt(v) + " <= " + fmt(calibration::kLemma23)};
  });
  return s;
}

}  // namespace perfolab
