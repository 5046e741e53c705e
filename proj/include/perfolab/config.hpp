#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perfolab/elliptic_operator.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/measure.hpp"
#include "perfolab/pde.hpp"

namespace perfolab {

enum class SweepMode { kClassic, kSingular, kCorrectorOnly };

std::string mode_name(SweepMode m);

/// A validated scenario. Grammar (INI, '#' or ';' start a comment line):
///
///   [domain]    rect = x0, y0, x1, y1                       (default 0,0,1,1)
///   [operator]  type = laplace | matrix | scalar | checkerboard | radial
///               a11, a12, a22 (matrix); value (scalar); a, b, k (checkerboard);
///               base, slope, center = x,y, exponent (radial); alpha (default 1)
///   [measure]   density = zero | constant(c) | radial(c, cx, cy, p) | checkerboard(a, b, k)
///               cap = number (truncation, optional)
///               atoms = (x, y, m); (x, y, m)
///               segments = (x0, y0, x1, y1, l); ...
///   [load]      f = constant(v) | product_sine(a) | bump(a, cx, cy, R)
///   [sweep]     h = 4, 6, 8           (strictly increasing)
///               spacing = 1/1024      (global) or spacings = s1, s2, ... (one per h)
///               mode = classic | singular | corrector-only
///               seed = integer, rel_tol = number, pin_nearest = true | false
///
/// Numbers accept fractions such as 1/1024.
struct ScenarioConfig {
  Rect domain{0.0, 0.0, 1.0, 1.0};
  EllipticOperator op;
  MeasureSpec measure = MeasureSpec::zero(Rect{0.0, 0.0, 1.0, 1.0});
  LoadSpec load = LoadSpec::product_sine(Rect{0.0, 0.0, 1.0, 1.0}, 1.0);
  std::vector<int> h_list;
  std::vector<double> spacings;  ///< one per h
  SweepMode mode = SweepMode::kClassic;
  std::uint64_t seed = 20240917;
  double rel_tol = 1e-10;
  bool pin_nearest = false;

  double finest_spacing() const;
};

/// Rejection of a config, carrying every problem found.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Decimal number or fraction such as 1/1024; throws ValidationError.
double parse_number(const std::string& text);

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

}  // namespace perfolab
