#pragma once

#include <string>
#include <variant>

#include "perfolab/geometry.hpp"

namespace perfolab {

/// Symmetric 2x2 coefficient matrix.
struct Sym2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;

  double quad(double x, double y) const { return a11 * x * x + 2.0 * a12 * x * y + a22 * y * y; }
  double min_eig() const;
  double max_eig() const;
  friend bool operator==(const Sym2&, const Sym2&) = default;
};

struct LaplaceCoefficient {
  friend bool operator==(const LaplaceCoefficient&, const LaplaceCoefficient&) = default;
};
struct MatrixCoefficient {
  Sym2 a;
  friend bool operator==(const MatrixCoefficient&, const MatrixCoefficient&) = default;
};
struct ScalarConstant {
  double value = 1.0;
  friend bool operator==(const ScalarConstant&, const ScalarConstant&) = default;
};
struct ScalarCheckerboard {
  double a = 1.0;
  double b = 1.0;
  int k = 1;
  friend bool operator==(const ScalarCheckerboard&, const ScalarCheckerboard&) = default;
};
/// base + slope * |x - center|^exponent
struct ScalarRadial {
  double base = 1.0;
  double slope = 0.0;
  Point center;
  double exponent = 1.0;
  friend bool operator==(const ScalarRadial&, const ScalarRadial&) = default;
};

using Coefficient =
    std::variant<LaplaceCoefficient, MatrixCoefficient, ScalarConstant, ScalarCheckerboard, ScalarRadial>;

/// L u = -div(A(x) grad u) with A symmetric and
///   alpha |xi|^2 <= xi . A(x) xi <= alpha^{-1} |xi|^2.
/// The bound is verified on a deterministic sample of `window` at
/// construction; violations throw ValidationError.
class EllipticOperator {
 public:
  EllipticOperator();  // Laplace, alpha = 1
  EllipticOperator(Coefficient coefficient, double alpha, Rect window = Rect{0.0, 0.0, 1.0, 1.0});

  static EllipticOperator laplace() { return EllipticOperator(); }
  static EllipticOperator matrix(double a11, double a12, double a22, double alpha) {
    return EllipticOperator(MatrixCoefficient{Sym2{a11, a12, a22}}, alpha);
  }

  Sym2 at(Point p) const;
  double alpha() const { return alpha_; }
  bool is_laplace() const { return std::holds_alternative<LaplaceCoefficient>(coefficient_); }
  bool is_constant() const;
  const Coefficient& coefficient() const { return coefficient_; }
  /// Stable textual identity, used as a memoization key and in reports.
  std::string fingerprint() const;

  friend bool operator==(const EllipticOperator& a, const EllipticOperator& b) {
    return a.coefficient_ == b.coefficient_ && a.alpha_ == b.alpha_;
  }

 private:
  Coefficient coefficient_;
  double alpha_ = 1.0;
};

}  // namespace perfolab
