#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "perfolab/capacity.hpp"
#include "perfolab/errors.hpp"

using namespace perfolab;

namespace {

const Point kC{0.5, 0.5};
const Disk kInner{kC, 0.25};
const Disk kOuter{kC, 0.5};

CapacityMesh mesh_r(double divisions) { return CapacityMesh{0.5 / divisions, kC}; }
// Spacing measured against the plate radius 0.25.
CapacityMesh mesh_plate(double divisions) { return CapacityMesh{0.25 / divisions, kC}; }

}  // namespace

TEST_CASE("closed-form concentric capacity") {
  CHECK(cap_concentric_closed_form(0.0, 0.5, 2) == 0.0);
  CHECK(cap_concentric_closed_form(0.25, 0.5, 2) == doctest::Approx(2.0 * M_PI / std::log(2.0)));
  CHECK(cap_concentric_closed_form(0.25, 0.5, 2) == doctest::Approx(9.0647).epsilon(1e-4));
  CHECK(cap_concentric_closed_form(1.0, 2.0, 3) == doctest::Approx(8.0 * M_PI));
  CHECK_THROWS_AS(cap_concentric_closed_form(0.5, 0.5, 2), ValidationError);
  CHECK_THROWS_AS(cap_concentric_closed_form(0.1, 0.5, 4), ValidationError);
}

TEST_CASE("variational capacity of concentric disks") {
  const double exact = cap_concentric_closed_form(0.25, 0.5);
  const double lap = cap_variational(kInner, kOuter, EllipticOperator::laplace(), mesh_plate(64));
  CHECK(std::abs(lap - exact) / exact <= 0.02);

  const double twice = cap_variational(kInner, kOuter, EllipticOperator::matrix(2.0, 0.0, 2.0, 0.5), mesh_plate(64));
  CHECK(twice == doctest::Approx(2.0 * lap).epsilon(1e-9));

  // Node containment makes the geometric error first order in the spacing.
  const double e32 = std::abs(cap_variational(kInner, kOuter, EllipticOperator::laplace(), mesh_r(32)) - exact);
  const double e64 = std::abs(cap_variational(kInner, kOuter, EllipticOperator::laplace(), mesh_r(64)) - exact);
  CHECK(e64 < 0.6 * e32);
  CHECK(e64 > 0.4 * e32);
}

TEST_CASE("variational capacity rejects bad inputs") {
  const auto lap = EllipticOperator::laplace();
  CHECK_THROWS_AS(cap_variational(Disk{kC, 0.01}, kOuter, lap, mesh_r(32)), ValidationError);
  CHECK_THROWS_AS(cap_variational(kOuter, kInner, lap, mesh_r(64)), ValidationError);
  CHECK_THROWS_AS(cap_variational(kInner, kOuter, lap, CapacityMesh{0.0, kC}), ValidationError);
}

TEST_CASE("small holes have small capacity") {
  const auto lap = EllipticOperator::laplace();
  const double c = annular_capacity(1e-3 * 0.5, 0.5, lap, kC);
  CHECK(c < 1.0);
  CHECK(c == doctest::Approx(cap_concentric_closed_form(5e-4, 0.5)).epsilon(1e-10));
  const auto aniso = EllipticOperator::matrix(1.3, 0.2, 0.9, 0.6);
  double prev = annular_capacity(0.4, 0.5, aniso, kC);
  for (double rho : {0.2, 0.05, 0.01, 1e-3 * 0.5}) {
    const double v = annular_capacity(rho, 0.5, aniso, kC);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1.0 / 0.6);
}

TEST_CASE("annular capacity matches the closed form and scales with A") {
  const auto lap = EllipticOperator::laplace();
  for (double rho : {0.4, 0.25, 0.01}) {
    CHECK(annular_capacity(rho, 0.5, lap) == doctest::Approx(cap_concentric_closed_form(rho, 0.5)).epsilon(1e-10));
  }
  const auto two = EllipticOperator::matrix(2.0, 0.0, 2.0, 0.5);
  CHECK(annular_capacity(0.25, 0.5, two) == doctest::Approx(2.0 * cap_concentric_closed_form(0.25, 0.5)).epsilon(1e-10));
  // For a constant matrix the annular value is close to the variational one.
  const auto aniso = EllipticOperator::matrix(1.4, 0.3, 0.8, 0.5);
  const double ann = annular_capacity(0.25, 0.5, aniso, kC);
  const double var = cap_variational(kInner, kOuter, aniso, mesh_r(64));
  CHECK(std::abs(ann - var) / ann <= 0.03);
  CHECK_THROWS_AS(annular_capacity(0.5, 0.5, lap), ValidationError);
}

TEST_CASE("mu-capacity") {
  const auto lap = EllipticOperator::laplace();
  const Region a = kOuter;
  const CapacityMesh m = mesh_r(32);
  const Rect unit{0.0, 0.0, 1.0, 1.0};

  CHECK(mu_capacity(kInner, a, MeasureSpec::zero(unit), lap, m) == 0.0);

  const double inf_flag = mu_capacity(kInner, a, MeasureSpec::zero(unit), lap, m, true);
  CHECK(inf_flag == cap_variational(kInner, a, lap, m));

  double prev = 0.0;
  const double area = M_PI * 0.25;
  for (double c : {1.0, 10.0, 100.0}) {
    const MeasureSpec mu{unit, Density{ConstantDensity{c}}, {}, {}};
    const double v = mu_capacity(Region(kOuter), a, mu, lap, m);
    CHECK(v > prev);
    CHECK(v <= c * area * 1.01);
    prev = v;
  }

  MeasureSpec atoms = MeasureSpec::zero(unit);
  atoms.atoms.push_back({kC, 1.0});
  CHECK_THROWS_AS(mu_capacity(kInner, a, atoms, lap, m), ValidationError);
  CHECK_THROWS_AS(mu_capacity(Disk{{0.9, 0.5}, 0.2}, a, MeasureSpec::zero(unit), lap, m), ValidationError);
}

TEST_CASE("capacitary potential and its distributions") {
  const auto lap = EllipticOperator::laplace();
  const CapacitaryPotential p = capacitary_potential(kInner, kOuter, lap, mesh_plate(64));
  CHECK(p.gamma_mass() == doctest::Approx(p.cap_value).epsilon(1e-8));
  CHECK(p.nu_mass() == doctest::Approx(p.cap_value).epsilon(1e-8));
  double max_err = 0.0;
  for (std::size_t k = 0; k < p.w.values.size(); ++k) {
    const double w = p.w.values[k];
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(p.gamma[k] >= -1e-12 * p.cap_value);
    CHECK(p.nu[k] >= -1e-12 * p.cap_value);
    if (p.inner[k]) CHECK(w == 1.0);
    if (p.outer[k]) CHECK(w == 0.0);
    const double d = distance(p.w.grid.node(k), kC);
    if (d > 0.25 && d < 0.5) {
      max_err = std::max(max_err, std::abs(w - std::log(0.5 / d) / std::log(2.0)));
    }
  }
  CHECK(max_err <= 0.02);

  const CapacitaryPotential q = capacitary_potential(kInner, kOuter, EllipticOperator::matrix(2.0, 0.0, 2.0, 0.5), mesh_plate(64));
  CHECK(q.cap_value == doctest::Approx(2.0 * p.cap_value).epsilon(1e-9));
  double diff = 0.0;
  for (std::size_t k = 0; k < p.w.values.size(); ++k) diff = std::max(diff, std::abs(p.w.values[k] - q.w.values[k]));
  CHECK(diff <= 1e-9);
}

TEST_CASE("boundary averages") {
  const auto lap = EllipticOperator::laplace();
  const CapacitaryPotential p = capacitary_potential(kInner, kOuter, lap, mesh_r(64));
  const Field five = interpolate(p.w.grid, [](Point) { return 5.0; });
  CHECK(boundary_average(five, p) == doctest::Approx(5.0).epsilon(1e-12));

  const Field lin = interpolate(p.w.grid, [](Point x) { return x.x + 2.0 * x.y; });
  CHECK(boundary_average(lin, p) == doctest::Approx(1.5).epsilon(0.01));

  const Field wave = interpolate(p.w.grid, [](Point x) { return std::sin(9.0 * x.x) * std::cos(5.0 * x.y); });
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < wave.values.size(); ++k) {
    if (p.nu[k] != 0.0) {
      lo = std::min(lo, wave.values[k]);
      hi = std::max(hi, wave.values[k]);
    }
  }
  const double avg = boundary_average(wave, p);
  CHECK(avg >= lo - 1e-9 * (hi - lo));
  CHECK(avg <= hi + 1e-9 * (hi - lo));

  CapacitaryPotential degenerate = p;
  std::fill(degenerate.nu.begin(), degenerate.nu.end(), 0.0);
  CHECK_THROWS(boundary_average(five, degenerate));
}

TEST_CASE("hole radius") {
  const auto lap = EllipticOperator::laplace();
  CHECK(hole_radius(0.0, 0.5, lap) == 0.0);
  CHECK(hole_radius(2.0 * M_PI, 0.5, lap) == doctest::Approx(0.5 / M_E).epsilon(1e-12));
  CHECK(hole_radius(2.0 * M_PI, 0.5, lap) == doctest::Approx(0.18394).epsilon(1e-4));
  CHECK(hole_radius(12.5, 0.125, lap) == doctest::Approx(0.125 * std::exp(-2.0 * M_PI / 12.5)).epsilon(1e-12));
  CHECK(hole_radius(12.5, 0.125, lap) == doctest::Approx(0.075616).epsilon(1e-5));
  CHECK_THROWS_AS(hole_radius(INFINITY, 0.5, lap), ValidationError);
  CHECK_THROWS_AS(hole_radius(-1.0, 0.5, lap), ValidationError);
  CHECK_THROWS_AS(hole_radius(1.0, 0.0, lap), ValidationError);
}

TEST_CASE("hole radius inverts the capacity over six orders of magnitude") {
  const double tol = 1e-6;
  const auto aniso = EllipticOperator::matrix(1.4, 0.3, 0.8, 0.5);
  const EllipticOperator radial(ScalarRadial{1.0, 0.5, kC, 1.0}, 0.5);
  for (const auto* op : {&aniso, &radial}) {
    for (double t : {1e-1, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5}) {
      const double rho = hole_radius(t, 0.125, *op, tol, kC);
      CHECK(rho >= 0.0);
      CHECK(rho < 0.125);
      const double cap = annular_capacity(rho, 0.125, *op, kC);
      CHECK(std::abs(cap - t) <= tol * t);
    }
  }
  const auto lap = EllipticOperator::laplace();
  for (double t : {1e-1, 1.0, 1e2, 1e5}) {
    CHECK(cap_concentric_closed_form(hole_radius(t, 0.3, lap), 0.3) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("radius cache is safe under concurrent use") {
  RadiusCache cache;
  const auto aniso = EllipticOperator::matrix(1.4, 0.3, 0.8, 0.5);
  const std::vector<double> targets{5.0, 12.5, 40.0};
  std::vector<std::vector<double>> out(8, std::vector<double>(targets.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < out.size(); ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t k = 0; k < targets.size(); ++k) out[t][k] = cache.radius(targets[k], 0.125, aniso, 1e-6, kC);
    });
  }
  for (auto& th : threads) th.join();
  CHECK(cache.size() == targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double ref = hole_radius(targets[k], 0.125, aniso, 1e-6, kC);
    for (const auto& row : out) CHECK(row[k] == ref);
  }
}

TEST_CASE("Poincare modulus estimate") {
  const auto lap = EllipticOperator::laplace();
  const Rect unit{0.0, 0.0, 1.0, 1.0};
  CHECK(poincare_modulus_estimate(MeasureSpec::zero(unit), 0.2, kC, lap, 5) == 0.0);
  const MeasureSpec mu{unit, Density{ConstantDensity{400.0}}, {}, {}};
  const double a = poincare_modulus_estimate(mu, 0.2, kC, lap, 8);
  const double b = poincare_modulus_estimate(mu, 0.1, kC, lap, 8);
  const double c = poincare_modulus_estimate(mu, 0.05, kC, lap, 8);
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c > 0.0);
  MeasureSpec atoms = mu;
  atoms.atoms.push_back({kC, 1.0});
  CHECK_THROWS_AS(poincare_modulus_estimate(atoms, 0.2, kC, lap, 4), ValidationError);
}
