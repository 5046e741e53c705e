#include "perfolab/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace perfolab {

double SmoothField::operator()(Point p) const {
  double v = offset;
  for (const auto& m : modes) v += m.amplitude * std::sin(m.kx * p.x + m.ky * p.y + m.phase);
  return v;
}

std::vector<SmoothField> random_field_corpus(std::uint64_t seed, std::size_t count) {
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(seed);
  // Draw through explicit transforms so the corpus does not depend on the
  // standard library's distribution implementations.
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  std::vector<SmoothField> out;
  out.reserve(count);
  if (count > 0) out.push_back(SmoothField{1.0, {}});
  while (out.size() < count) {
    SmoothField f;
    f.offset = uniform(-1.0, 1.0);
    for (int m = 0; m < 6; ++m) {
      const double kx = uniform(-4.0 * pi, 4.0 * pi);
      const double ky = uniform(-4.0 * pi, 4.0 * pi);
      const double amp = uniform(0.2, 1.0) / (1.0 + std::hypot(kx, ky) / pi);
      f.modes.push_back({kx, ky, uniform(0.0, 2.0 * pi), amp});
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace perfolab
