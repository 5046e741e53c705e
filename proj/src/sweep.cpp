#include "perfolab/sweep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "perfolab/capacity.hpp"
#include "perfolab/parallel.hpp"
#include "perfolab/pde.hpp"

namespace perfolab {

bool ConvergenceReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

void preflight(const ScenarioConfig& cfg) {
  if (cfg.pin_nearest) return;
  for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
    const HoleFamily family = build_holes(cfg.domain, cfg.measure, cfg.op, cfg.h_list[i]);
    const HolesReport rep = holes_report(family, cfg.spacings[i]);
    if (!rep.resolvable) {
      std::ostringstream os;
      os << "spacing " << cfg.spacings[i] << " does not resolve the holes at h = " << cfg.h_list[i]
         << " (min radius " << rep.min_radius << " < 2 * spacing)";
      throw ValidationError(os.str());
    }
  }
}

SweepResult run_sweep(const ScenarioConfig& cfg, const SweepOptions& opt) {
  preflight(cfg);
  const CgOptions cg{cfg.rel_tol, 0};
  const MeasureSpec mu0 = decompose(cfg.measure).mu0;
  SweepResult out;
  ConvergenceReport& rep = out.report;
  rep.mode = mode_name(cfg.mode);
  std::ostringstream ref;
  ref << "relaxed solve with mu0 = {density " << mu0.density.describe() << ", " << mu0.segments.size()
      << " segments}; " << cfg.measure.atoms.size() << " atoms dropped";
  rep.reference = ref.str();
  rep.reference_spacing = cfg.finest_spacing();

  const bool solve = cfg.mode != SweepMode::kCorrectorOnly;
  if (solve) {
    out.reference = solve_relaxed(cfg.domain, mu0, cfg.op, cfg.load, rep.reference_spacing, cg).u;
    rep.reference_l2 = l2_norm(out.reference);
  }

  const std::size_t n = cfg.h_list.size();
  rep.rows.resize(n);
  out.families.resize(n);
  if (opt.keep_fields) out.solutions.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow& row = rep.rows[i];
    row.h = cfg.h_list[i];
    row.spacing = cfg.spacings[i];
    try {
      out.families[i] = build_holes(cfg.domain, cfg.measure, cfg.op, row.h);
      const HoleFamily& family = out.families[i];
      const HolesReport hr = holes_report(family, row.spacing);
      row.holes = hr.perforating;
      row.min_radius = hr.min_radius;
      row.max_radius = hr.max_radius;
      if (solve) {
        PerforatedOptions popt;
        popt.pin_nearest = cfg.pin_nearest;
        popt.cg = cg;
        PdeSolution sol = solve_dirichlet_perforated(cfg.domain, family, cfg.op, cfg.load, row.spacing, popt);
        const FieldMetrics m = field_metrics(sol.u, out.reference);
        row.l2_err = m.l2;
        row.rel_l2_err = rep.reference_l2 > 0.0 ? m.l2 / rep.reference_l2 : 0.0;
        row.h1_err = m.h1;
        row.energy = energy_functional(sol.u, mu0, cfg.op);
        if (opt.keep_fields) out.solutions[i] = std::move(sol.u);
      }
      Field w = corrector_field(cfg.domain, family, cfg.op, row.spacing);
      for (double& v : w.values) v -= 1.0;
      row.corrector_l2 = l2_norm(w);
    } catch (const NumericalError& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.ok = false;
      row.error = e.what();
      row.l2_err = row.rel_l2_err = row.h1_err = row.energy = row.corrector_l2 = nan;
    }
    row.runtime_ms = opt.record_runtime
                         ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()
                         : 0.0;
  });
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double num(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string report_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "h,holes,min_radius,max_radius,spacing,l2_err,rel_l2_err,h1_err,energy,corrector_l2,runtime_ms\n";
  for (const auto& row : r.rows) {
    os << row.h << ',' << row.holes << ',' << fixed(row.min_radius, 12) << ',' << fixed(row.max_radius, 12) << ','
       << fixed(row.spacing, 12) << ',' << fixed(row.l2_err, 12) << ',' << fixed(row.rel_l2_err, 12) << ','
       << fixed(row.h1_err, 12) << ',' << fixed(row.energy, 12) << ',' << fixed(row.corrector_l2, 12) << ','
       << fixed(row.runtime_ms, 3) << '\n';
  }
  return os.str();
}

std::string report_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["reference"] = r.reference;
  j["reference_spacing"] = r.reference_spacing;
  j["reference_l2"] = r.reference_l2;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"h", row.h},
                         {"holes", row.holes},
                         {"min_radius", num(row.min_radius)},
                         {"max_radius", num(row.max_radius)},
                         {"spacing", num(row.spacing)},
                         {"l2_err", num(row.l2_err)},
                         {"rel_l2_err", num(row.rel_l2_err)},
                         {"h1_err", num(row.h1_err)},
                         {"energy", num(row.energy)},
                         {"corrector_l2", num(row.corrector_l2)},
                         {"runtime_ms", num(row.runtime_ms)},
                         {"ok", row.ok},
                         {"error", row.error}});
  }
  return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ConvergenceReport r;
    r.mode = j.at("mode").get<std::string>();
    r.reference = j.at("reference").get<std::string>();
    r.reference_spacing = num(j.at("reference_spacing"));
    r.reference_l2 = num(j.at("reference_l2"));
    for (const auto& e : j.at("rows")) {
      SweepRow row;
      row.h = e.at("h").get<int>();
      row.holes = e.at("holes").get<std::size_t>();
      row.min_radius = num(e.at("min_radius"));
      row.max_radius = num(e.at("max_radius"));
      row.spacing = num(e.at("spacing"));
      row.l2_err = num(e.at("l2_err"));
      row.rel_l2_err = num(e.at("rel_l2_err"));
      row.h1_err = num(e.at("h1_err"));
      row.energy = num(e.at("energy"));
      row.corrector_l2 = num(e.at("corrector_l2"));
      row.runtime_ms = num(e.at("runtime_ms"));
      row.ok = e.at("ok").get<bool>();
      row.error = e.at("error").get<std::string>();
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report JSON: ") + e.what());
  }
}

void emit_report(const ConvergenceReport& r, ReportFormat format, const std::string& path) {
  const std::string text = format == ReportFormat::kCsv ? report_csv(r) : report_json(r);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

SemicontinuityProbe semicontinuity_probe(const ScenarioConfig& cfg, const HoleFamily& family, double spacing) {
  const Point c = cfg.domain.center();
  const Disk a{c, 0.15}, b{c, 0.35};
  const CapacityMesh mesh{spacing, c};
  SemicontinuityProbe p;
  MeasureSpec mu = cfg.measure;
  mu.atoms.clear();
  p.cap_mu = mu_capacity(a, b, mu, cfg.op, mesh);
  std::vector<Disk> inside;
  for (const auto& hole : family.holes) {
    if (hole.radius > 0.0 && a.contains_open(hole.center)) inside.push_back({hole.center, hole.radius});
  }
  p.holes_in_a = inside.size();
  p.cap_holes = inside.empty() ? 0.0 : cap_variational(Region(inside), b, cfg.op, mesh);
  return p;
}

}  // namespace perfolab
