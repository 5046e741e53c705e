#include "perfolab/elliptic_operator.hpp"

#include <cmath>
#include <sstream>

#include "perfolab/errors.hpp"

namespace perfolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr int kSamples = 33;
constexpr double kSlack = 1e-12;

}  // namespace

double Sym2::min_eig() const {
  const double m = 0.5 * (a11 + a22);
  const double d = std::hypot(0.5 * (a11 - a22), a12);
  return m - d;
}

double Sym2::max_eig() const {
  const double m = 0.5 * (a11 + a22);
  const double d = std::hypot(0.5 * (a11 - a22), a12);
  return m + d;
}

EllipticOperator::EllipticOperator() : coefficient_(LaplaceCoefficient{}), alpha_(1.0) {}

EllipticOperator::EllipticOperator(Coefficient coefficient, double alpha, Rect window)
    : coefficient_(std::move(coefficient)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "ellipticity constant alpha must lie in (0, 1], got " << alpha;
    throw ValidationError(os.str());
  }
  for (int j = 0; j < kSamples; ++j) {
    for (int i = 0; i < kSamples; ++i) {
      const Point p{window.x0 + window.width() * i / (kSamples - 1),
                    window.y0 + window.height() * j / (kSamples - 1)};
      const Sym2 a = at(p);
      const double lo = a.min_eig(), hi = a.max_eig();
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo < alpha_ * (1.0 - kSlack) ||
          hi > (1.0 + kSlack) / alpha_) {
        std::ostringstream os;
        os << "operator " << fingerprint() << " violates ellipticity with alpha = " << alpha_
           << " at (" << p.x << ", " << p.y << "): eigenvalues [" << lo << ", " << hi << "]";
        throw ValidationError(os.str());
      }
    }
  }
}

Sym2 EllipticOperator::at(Point p) const {
  return std::visit(
      Overloaded{
          [](const LaplaceCoefficient&) { return Sym2{}; },
          [](const MatrixCoefficient& m) { return m.a; },
          [](const ScalarConstant& s) { return Sym2{s.value, 0.0, s.value}; },
          [&](const ScalarCheckerboard& c) {
            const auto ix = static_cast<long long>(std::floor(c.k * p.x));
            const auto iy = static_cast<long long>(std::floor(c.k * p.y));
            const double v = ((ix + iy) % 2 == 0) ? c.a : c.b;
            return Sym2{v, 0.0, v};
          },
          [&](const ScalarRadial& r) {
            const double v = r.base + r.slope * std::pow(distance(p, r.center), r.exponent);
            return Sym2{v, 0.0, v};
          },
      },
      coefficient_);
}

bool EllipticOperator::is_constant() const {
  return std::holds_alternative<LaplaceCoefficient>(coefficient_) ||
         std::holds_alternative<MatrixCoefficient>(coefficient_) ||
         std::holds_alternative<ScalarConstant>(coefficient_);
}

std::string EllipticOperator::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const LaplaceCoefficient&) { os << "laplace"; },
                 [&](const MatrixCoefficient& m) {
                   os << "matrix(" << m.a.a11 << "," << m.a.a12 << "," << m.a.a22 << ")";
                 },
                 [&](const ScalarConstant& s) { os << "scalar(" << s.value << ")"; },
                 [&](const ScalarCheckerboard& c) {
                   os << "checkerboard(" << c.a << "," << c.b << "," << c.k << ")";
                 },
                 [&](const ScalarRadial& r) {
                   os << "radial(" << r.base << "," << r.slope << "," << r.center.x << ","
                      << r.center.y << "," << r.exponent << ")";
                 },
             },
             coefficient_);
  os << ";alpha=" << alpha_;
  return os.str();
}

}  // namespace perfolab
