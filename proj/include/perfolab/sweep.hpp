#pragma once

#include <string>
#include <vector>

#include "perfolab/config.hpp"
#include "perfolab/grid.hpp"
#include "perfolab/perforation.hpp"

namespace perfolab {

struct SweepRow {
  int h = 0;
  std::size_t holes = 0;  ///< holes of positive radius
  double min_radius = 0.0;
  double max_radius = 0.0;
  double spacing = 0.0;
  double l2_err = 0.0;       ///< ||u_h - u_ref||_{L^2}
  double rel_l2_err = 0.0;   ///< l2_err / ||u_ref||_{L^2}
  double h1_err = 0.0;       ///< |u_h - u_ref|_{H^1}
  double energy = 0.0;       ///< F_{mu0}(u_h)
  double corrector_l2 = 0.0; ///< ||w_h - 1||_{L^2}
  double runtime_ms = 0.0;
  bool ok = true;
  std::string error;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct ConvergenceReport {
  std::string mode;
  std::string reference;  ///< description of the mu0 used for the reference solve
  double reference_spacing = 0.0;
  double reference_l2 = 0.0;
  std::vector<SweepRow> rows;

  bool all_ok() const;
  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

struct SweepOptions {
  /// Write 0 in the runtime column so that reports are byte-reproducible.
  bool record_runtime = true;
  /// Keep u_h (and the reference) in the result for further analysis.
  bool keep_fields = false;
};

struct SweepResult {
  ConvergenceReport report;
  Field reference;
  std::vector<Field> solutions;   ///< u_h per row when keep_fields
  std::vector<HoleFamily> families;
};

/// Throws ValidationError naming the first h whose holes are not resolved by
/// its spacing (skipped when pin_nearest is set).
void preflight(const ScenarioConfig& cfg);

/// Reference relaxed solve with mu0 = decompose(mu).mu0 on the finest mesh,
/// then one perforated solve per h with holes built from the full mu.
/// A numerical failure marks its row and leaves the others intact.
SweepResult run_sweep(const ScenarioConfig& cfg, const SweepOptions& opt = {});

enum class ReportFormat { kCsv, kJson };

std::string report_csv(const ConvergenceReport& r);
std::string report_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const std::string& text);
void emit_report(const ConvergenceReport& r, ReportFormat format, const std::string& path);

/// cap_mu(A, B) against cap^L(E_h cap A, B) for A = B_{0.15}, B = B_{0.35}
/// centred in the domain, with the holes whose centres lie in A.
struct SemicontinuityProbe {
  double cap_mu = 0.0;
  double cap_holes = 0.0;
  std::size_t holes_in_a = 0;
  bool holds(double slack = 0.10) const { return cap_mu <= cap_holes * (1.0 + slack); }
};
SemicontinuityProbe semicontinuity_probe(const ScenarioConfig& cfg, const HoleFamily& family, double spacing);

}  // namespace perfolab
