#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perfolab/elliptic_operator.hpp"
#include "perfolab/measure.hpp"

namespace perfolab {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Proposition 1.5 (i)-(vi) on `count` seeded random configurations: plates
/// (disks and boxes) inside a container disk, catalog measures, the Laplacian
/// and a constant anisotropic matrix. Relative tolerance `tol`.
std::vector<PropertyCheck> proposition_15_suite(std::uint64_t seed, int count, double tol = 0.03);

/// Largest ratio int_A u^2 dmu / (||mu||_K int_{B_R} |grad u|^2) over the
/// first `fields` corpus fields multiplied by a cutoff vanishing on dB_R,
/// for the density test measures.
double lemma_12_ratio(std::size_t fields);

/// Largest M_r^rho(phi) / M_r^{r/2}(phi), rho in {r/16, r/8, r/4, r/2}, for
/// a fixed positive field (Laplacian).
double lemma_22_ratio();

/// Largest ||u - M_r^rho u||_{L^2(Q_r)} / (r ||grad u||_{L^2(Q_r)}) over the
/// corpus, r in {0.2, 0.1, 0.05} and rho in {r/2, r/4, r/8}.
double lemma_23_ratio(std::size_t fields);

/// The measures used by the Lemma 1.2 property.
std::vector<MeasureSpec> lemma_12_measures();

struct SelftestSummary {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
  std::string text() const;
};

/// Fast versions of the invariant suites (a few seconds). Deterministic.
SelftestSummary selftest();

}  // namespace perfolab
