#pragma once

#include <cstdint>
#include <vector>

#include "perfolab/geometry.hpp"

namespace perfolab {

/// Smooth deterministic test function: offset + sum_m a_m sin(k_m . x + phi_m).
struct SmoothField {
  struct Mode {
    double kx, ky, phase, amplitude;
  };
  double offset = 0.0;
  std::vector<Mode> modes;

  double operator()(Point p) const;
};

/// The reference corpus of smoothed random fields. Element 0 is the constant
/// field 1; the rest carry 6 Fourier modes with wavenumbers up to 4*pi and
/// amplitudes decaying like 1/(1 + |k|/pi). Identical (seed, count) give
/// identical corpora.
std::vector<SmoothField> random_field_corpus(std::uint64_t seed, std::size_t count);

inline constexpr std::uint64_t kReferenceCorpusSeed = 20240917;

}  // namespace perfolab
