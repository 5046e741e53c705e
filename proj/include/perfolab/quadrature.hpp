#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace perfolab::quad {

/// Full (symmetric) Gauss-Legendre rule on [-1, 1] with N points.
template <std::size_t N>
struct GaussRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussRule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    std::size_t k = 0;
    // boost stores the nonnegative half; 0 is first when N is odd.
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] == 0.0) {
        nodes[k] = 0.0;
        weights[k++] = w[j];
      } else {
        nodes[k] = -a[j];
        weights[k++] = w[j];
        nodes[k] = a[j];
        weights[k++] = w[j];
      }
    }
  }

  static const GaussRule& get() {
    static const GaussRule rule;
    return rule;
  }

  /// Integral of f over [a, b].
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += weights[j] * f(mid + half * nodes[j]);
    return s * half;
  }
};

/// Quadrature point on a reference triangle in barycentric form.
struct TriPoint {
  double l0, l1, l2, w;  // weights sum to 1 (multiply by area)
};

/// Degree-2 rule on edge midpoints.
inline constexpr std::array<TriPoint, 3> kTriangleDeg2 = {{
    {0.5, 0.5, 0.0, 1.0 / 3.0},
    {0.0, 0.5, 0.5, 1.0 / 3.0},
    {0.5, 0.0, 0.5, 1.0 / 3.0},
}};

/// Degree-2 rule with interior points.
inline constexpr std::array<TriPoint, 3> kTriangleDeg2Interior = {{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
}};

/// Degree-4 Dunavant rule (6 points).
inline constexpr std::array<TriPoint, 6> kTriangleDeg4 = {{
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
}};

}  // namespace perfolab::quad
