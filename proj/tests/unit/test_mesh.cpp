#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "perfolab/assembly.hpp"
#include "perfolab/cg.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/grid.hpp"

using namespace perfolab;

namespace {

const Rect kUnit{0.0, 0.0, 1.0, 1.0};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("perfolab_test_" + name)).string();
}

}  // namespace

TEST_CASE("grid on a rectangle") {
  const Grid g = Grid::on_rect(Rect{0.0, 0.0, 2.0, 1.0}, 0.25);
  CHECK(g.nx() == 9);
  CHECK(g.ny() == 5);
  CHECK(g.extent() == Rect{0.0, 0.0, 2.0, 1.0});
  CHECK(g.on_boundary(0));
  CHECK(!g.on_boundary(g.index(4, 2)));
  CHECK_THROWS_AS(Grid::on_rect(kUnit, 0.3), ValidationError);
  CHECK_THROWS_AS(Grid::on_rect(kUnit, 0.0), ValidationError);
}

TEST_CASE("covering grids share the global lattice and triangulation") {
  const double s = 1.0 / 32.0;
  const Grid global = Grid::on_rect(kUnit, s);
  const Grid local = Grid::covering(Rect{0.31, 0.4, 0.52, 0.66}, s, Point{0.0, 0.0});
  const Rect e = local.extent();
  CHECK(e.x0 <= 0.31);
  CHECK(e.x1 >= 0.52);
  CHECK(e.y0 <= 0.4);
  CHECK(e.y1 >= 0.66);
  const auto oi = static_cast<std::size_t>(std::lround(local.origin().x / s));
  const auto oj = static_cast<std::size_t>(std::lround(local.origin().y / s));
  for (std::size_t cj = 0; cj < local.cells_y(); ++cj) {
    for (std::size_t ci = 0; ci < local.cells_x(); ++ci) {
      CHECK(local.rising_diagonal(ci, cj) == global.rising_diagonal(ci + oi, cj + oj));
    }
  }
  // Anchors on negative lattice offsets keep a valid parity.
  const Grid neg = Grid::covering(Rect{-0.2, -0.1, 0.1, 0.1}, s, Point{0.0, 0.0});
  CHECK((neg.parity() == 0 || neg.parity() == 1));
}

TEST_CASE("locate reproduces linear functions") {
  const Grid g = Grid::on_rect(kUnit, 0.125);
  const Field f = interpolate(g, [](Point p) { return 2.0 * p.x - 3.0 * p.y + 0.5; });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Point p{d(rng), d(rng)};
    const auto loc = g.locate(p);
    CHECK(loc.weights[0] + loc.weights[1] + loc.weights[2] == doctest::Approx(1.0));
    for (double w : loc.weights) CHECK(w >= -1e-12);
    CHECK(f.at(p) == doctest::Approx(2.0 * p.x - 3.0 * p.y + 0.5).epsilon(1e-12));
  }
  CHECK(f.at({1.0, 1.0}) == doctest::Approx(-0.5));
}

TEST_CASE("stiffness matrix: constants in the kernel, exact energy of linear fields") {
  const Grid g = Grid::on_rect(kUnit, 1.0 / 16.0);
  const auto op = EllipticOperator::matrix(1.5, 0.3, 0.8, 0.5);
  const StencilMatrix k = assemble_stiffness(g, op);
  const std::vector<double> ones(g.size(), 1.0);
  std::vector<double> y(g.size());
  k.apply(ones, y);
  for (double v : y) CHECK(std::abs(v) < 1e-12);
  const Field lin = interpolate(g, [](Point p) { return 2.0 * p.x + p.y; });
  // grad = (2, 1): A-energy = 1.5*4 + 2*0.3*2 + 0.8 = 8.0
  CHECK(k.quadratic_form(lin.values) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("mass matrices integrate the measure") {
  const Grid g = Grid::on_rect(kUnit, 1.0 / 64.0);
  const std::vector<double> ones(g.size(), 1.0);

  const MeasureSpec c{kUnit, Density{ConstantDensity{7.0}}, {}, {}};
  CHECK(assemble_measure_mass(g, c).quadratic_form(ones) == doctest::Approx(7.0).epsilon(1e-12));

  const Region disk(Disk{{0.5, 0.5}, 0.3});
  CHECK(assemble_measure_mass(g, c, &disk).quadratic_form(ones) ==
        doctest::Approx(7.0 * M_PI * 0.09).epsilon(0.01));

  MeasureSpec seg = MeasureSpec::zero(kUnit);
  seg.segments.push_back({{0.13, 0.21}, {0.77, 0.64}, 3.0});
  CHECK(assemble_measure_mass(g, seg).quadratic_form(ones) == doctest::Approx(3.0 * seg.segments[0].length()));
  // u = x along the segment: int l x^2 ds exactly (P1 is exact for linear u).
  const Field x = interpolate(g, [](Point p) { return p.x; });
  const auto& s0 = seg.segments[0];
  const double exact = 3.0 * s0.length() * (s0.p0.x * s0.p0.x + s0.p0.x * s0.p1.x + s0.p1.x * s0.p1.x) / 3.0;
  CHECK(assemble_measure_mass(g, seg).quadratic_form(x.values) == doctest::Approx(exact).epsilon(1e-12));

  MeasureSpec atom = c;
  atom.atoms.push_back({{0.5, 0.5}, 1.0});
  CHECK_THROWS_AS(assemble_measure_mass(g, atom), ValidationError);
}

TEST_CASE("load vector integrates the right-hand side") {
  const Grid g = Grid::on_rect(kUnit, 1.0 / 8.0);
  const auto load = assemble_load(g, [](Point) { return 3.0; });
  double sum = 0.0;
  for (double v : load) sum += v;
  CHECK(sum == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("conjugate gradients") {
  const Grid g = Grid::on_rect(kUnit, 1.0 / 20.0);
  StencilMatrix k = assemble_stiffness(g, EllipticOperator::laplace());
  k += assemble_measure_mass(g, MeasureSpec{kUnit, Density{ConstantDensity{5.0}}, {}, {}});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> b(g.size()), x(g.size(), 0.0), r(g.size());
  for (auto& v : b) v = d(rng);
  const auto stats = conjugate_gradient(k, b, x);
  k.apply(x, r);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    rn += (r[i] - b[i]) * (r[i] - b[i]);
    bn += b[i] * b[i];
  }
  CHECK(std::sqrt(rn / bn) <= 1e-10);
  CHECK(stats.relative_residual <= 1e-10);
  CHECK(stats.iterations > 0);

  std::vector<double> x2(g.size(), 0.0);
  CHECK_THROWS_AS(conjugate_gradient(k, b, x2, CgOptions{1e-10, 2}), NumericalError);

  std::vector<double> zero(g.size(), 0.0), x3(g.size(), 1.0);
  CHECK(conjugate_gradient(k, zero, x3).iterations == 0);
  CHECK(x3[0] == 0.0);

  // The backward-error test accepts no later than the plain relative test and
  // honours its own bound.
  std::vector<double> xp(g.size(), 0.0), xb2(g.size(), 0.0);
  const auto plain = conjugate_gradient(k, b, xp, CgOptions{1e-12, 0, false});
  const auto backward = conjugate_gradient(k, b, xb2, CgOptions{1e-12, 0, true});
  CHECK(backward.iterations <= plain.iterations);
  k.apply(xb2, r);
  double res = 0.0, xn = 0.0, dmax = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    res += (r[i] - b[i]) * (r[i] - b[i]);
    xn += xb2[i] * xb2[i];
    dmax = std::max(dmax, k.diagonal(i));
  }
  CHECK(std::sqrt(res) <= 1e-12 * (2.0 * dmax * std::sqrt(xn) + std::sqrt(bn)));

  StencilMatrix bad(2, 2);
  bad.add(0, 0, -1.0);
  std::vector<double> bb{1.0, 0.0, 0.0, 0.0}, xb(4, 0.0);
  CHECK_THROWS_AS(conjugate_gradient(bad, bb, xb), NumericalError);
}

TEST_CASE("field files round-trip") {
  const Grid g(Point{0.25, -0.5}, 0.125, 5, 3, 0);
  const Field f = interpolate(g, [](Point p) { return std::sin(3.0 * p.x) + p.y / 3.0; });

  const std::string csv = temp_path("field.csv"), bin = temp_path("field.bin");
  write_field_csv(f, csv);
  const Field c = read_field_csv(csv);
  CHECK(c.grid.same_layout(g));
  CHECK(c.values == f.values);

  write_field_binary(f, bin);
  const Field b = read_field_binary(bin);
  CHECK(b.grid.same_layout(g));
  CHECK(b.values == f.values);
  {
    std::ifstream in(bin, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "PLFD");
  }
  CHECK(std::filesystem::file_size(bin) == 4 + 4 + 8 + 8 + 3 * 8 + 15 * 8);
  std::remove(csv.c_str());
  std::remove(bin.c_str());

  CHECK_THROWS_AS(read_field_csv("/nonexistent/dir/f.csv"), IoError);
  CHECK_THROWS_AS(write_field_binary(f, "/nonexistent/dir/f.bin"), IoError);
  const std::string junk = temp_path("junk.bin");
  std::ofstream(junk) << "nope";
  CHECK_THROWS(read_field_binary(junk));
  std::remove(junk.c_str());
}

TEST_CASE("elliptic operator validation") {
  CHECK_THROWS_AS(EllipticOperator(LaplaceCoefficient{}, 0.0), ValidationError);
  CHECK_THROWS_AS(EllipticOperator(LaplaceCoefficient{}, 1.5), ValidationError);
  CHECK_THROWS_AS(EllipticOperator::matrix(3.0, 0.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(EllipticOperator(ScalarCheckerboard{0.1, 1.0, 3}, 0.5), ValidationError);
  CHECK_NOTHROW(EllipticOperator(ScalarCheckerboard{0.6, 1.5, 3}, 0.5));
  const auto op = EllipticOperator::matrix(1.0, 0.2, 1.0, 0.7);
  CHECK(op.at({0.3, 0.3}).a12 == 0.2);
  CHECK(op.fingerprint() != EllipticOperator::laplace().fingerprint());
  CHECK(EllipticOperator::laplace().is_laplace());
}
