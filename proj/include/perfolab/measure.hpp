#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "perfolab/geometry.hpp"

namespace perfolab {

// Density catalog ---------------------------------------------------------

struct ZeroDensity {
  friend bool operator==(const ZeroDensity&, const ZeroDensity&) = default;
};
struct ConstantDensity {
  double value = 0.0;
  friend bool operator==(const ConstantDensity&, const ConstantDensity&) = default;
};
/// value * |x - center|^exponent, exponent >= 0.
struct RadialDensity {
  double value = 0.0;
  Point center;
  double exponent = 0.0;
  friend bool operator==(const RadialDensity&, const RadialDensity&) = default;
};
/// `a` on cells with floor(k x) + floor(k y) even, `b` otherwise.
struct CheckerboardDensity {
  double a = 0.0;
  double b = 0.0;
  int k = 1;
  friend bool operator==(const CheckerboardDensity&, const CheckerboardDensity&) = default;
};

using DensityKind = std::variant<ZeroDensity, ConstantDensity, RadialDensity, CheckerboardDensity>;

/// Nonnegative area density g(x) = min(kind(x), cap).
struct Density {
  DensityKind kind = ZeroDensity{};
  double cap = std::numeric_limits<double>::infinity();

  double operator()(Point p) const;
  bool is_zero() const;
  /// Coordinates where g may fail to be smooth, inside [lo, hi].
  std::vector<double> x_breaks(double lo, double hi) const;
  std::vector<double> y_breaks(double lo, double hi) const;
  std::string describe() const;

  friend bool operator==(const Density&, const Density&) = default;
};

struct Atom {
  Point position;
  double mass = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Linear density `density` (mass per unit length) along the segment p0-p1.
struct SegmentMeasure {
  Point p0;
  Point p1;
  double density = 0.0;
  double length() const { return distance(p0, p1); }
  friend bool operator==(const SegmentMeasure&, const SegmentMeasure&) = default;
};

/// Positive Radon measure on the rectangle `domain`: an area density plus
/// point atoms plus segment measures.
struct MeasureSpec {
  Rect domain;
  Density density;
  std::vector<Atom> atoms;
  std::vector<SegmentMeasure> segments;

  /// Throws ValidationError if a component is negative or lies outside the
  /// open domain.
  void validate() const;
  bool is_zero() const;
  bool has_atoms() const { return !atoms.empty(); }

  static MeasureSpec zero(Rect domain) { return MeasureSpec{domain, {}, {}, {}}; }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

/// Half-open lattice cube [i1/h, (i1+1)/h) x [i2/h, (i2+1)/h).
struct Box {
  int level = 1;
  int i1 = 0;
  int i2 = 0;

  Rect rect() const;
  Point center() const { return rect().center(); }
  friend bool operator==(const Box&, const Box&) = default;
};

struct Decomposition {
  MeasureSpec mu0;  ///< density + segments (charges no set of zero capacity)
  MeasureSpec mu1;  ///< atoms only
};

/// mu(Q) for the half-open rectangle Q (upper faces excluded).
double mass_on_rect(const MeasureSpec& mu, const Rect& q);
double mass_on_box(const MeasureSpec& mu, const Box& box);
double total_mass(const MeasureSpec& mu);

/// Integral of the density over the closed rectangle q intersected with the
/// domain, by tensor Gauss-Legendre (order 8) with dyadic refinement.
double density_integral(const Density& g, const Rect& q);

/// Splits by component type: finite point sets carry zero capacity in the
/// plane, while absolutely continuous parts and segments charge no polar set.
Decomposition decompose(const MeasureSpec& mu);

/// Replaces the density by min(g, k); atoms and segments pass through.
MeasureSpec truncate_density(const MeasureSpec& mu, double k);

/// Sampled estimate (a lower bound converging from below under grid
/// refinement) of the Kato norm of mu restricted to `region`:
///   n = 3: sup_x int_A |y-x|^{-1} dmu(y)
///   n = 2: sup_x int_A log(diam A / |y-x|) dmu(y) + mu(A).
/// Returns +infinity when an atom lies in the region.
double kato_norm(const MeasureSpec& mu, const Rect& region, int n);

/// The kernel integral of kato_norm at one sample point x.
double kato_potential(const MeasureSpec& mu, const Rect& region, int n, Point x);

}  // namespace perfolab
