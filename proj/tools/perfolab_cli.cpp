// perfolab command line: capacity queries, hole families, single solves,
// convergence sweeps and the self-test suite.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O.
// PERFOLAB_THREADS overrides the worker count; PERFOLAB_SIMD=scalar|avx2
// overrides the kernel selection.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "perfolab/calibration.hpp"
#include "perfolab/capacity.hpp"
#include "perfolab/config.hpp"
#include "perfolab/kernels.hpp"
#include "perfolab/parallel.hpp"
#include "perfolab/pde.hpp"
#include "perfolab/perforation.hpp"
#include "perfolab/properties.hpp"
#include "perfolab/sweep.hpp"

using namespace perfolab;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

EllipticOperator parse_op(const std::string& spec) {
  if (spec == "laplace") return EllipticOperator::laplace();
  // matrix:a11,a12,a22,alpha
  if (spec.rfind("matrix:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(spec.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) {
      v.push_back(parse_number(item));
    }
    if (v.size() != 4) throw ValidationError("--op matrix:a11,a12,a22,alpha needs four numbers");
    return EllipticOperator::matrix(v[0], v[1], v[2], v[3]);
  }
  throw ValidationError("--op must be 'laplace' or 'matrix:a11,a12,a22,alpha'");
}

std::size_t h_index(const ScenarioConfig& cfg, int h) {
  for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
    if (cfg.h_list[i] == h) return i;
  }
  return cfg.h_list.size();
}

double spacing_for(const ScenarioConfig& cfg, int h) {
  const std::size_t i = h_index(cfg, h);
  return i < cfg.spacings.size() ? cfg.spacings[i] : cfg.finest_spacing();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  if (!out) throw IoError(path, "write failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perfolab: capacity-matched perforations and relaxed Dirichlet problems"};
  app.require_subcommand(1);

  // capacity
  auto* cap = app.add_subcommand("capacity", "capacity of the concentric condenser (B_inner, B_outer)");
  double inner = 0.0, outer = 0.0;
  std::string cap_spacing;
  std::string op_spec = "laplace";
  cap->add_option("--inner", inner, "inner radius")->required();
  cap->add_option("--outer", outer, "outer radius")->required();
  cap->add_option("--op", op_spec, "laplace | matrix:a11,a12,a22,alpha");
  cap->add_option("--spacing", cap_spacing, "mesh spacing, decimal or fraction (default outer/128)");

  // holes
  auto* holes = app.add_subcommand("holes", "hole family for one level h");
  std::string config_path, out_path;
  int h = 0;
  holes->set_help_flag("--help", "print this help message and exit");
  holes->add_option("--config", config_path, "scenario file")->required();
  holes->add_option("--h", h, "level")->required();
  holes->add_option("--out", out_path, "write the family as JSON");

  // solve
  auto* solve = app.add_subcommand("solve", "perforated solve for one level h");
  std::string field_out;
  solve->set_help_flag("--help", "print this help message and exit");
  solve->add_option("--config", config_path, "scenario file")->required();
  solve->add_option("--h", h, "level")->required();
  solve->add_option("--out", field_out, "write u_h (.csv or .bin)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over the h-list");
  std::string format = "csv";
  bool deterministic = false;
  sweep->add_option("--config", config_path, "scenario file")->required();
  sweep->add_option("--out", out_path, "report path")->required();
  sweep->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--deterministic", deterministic, "write 0 in runtime_ms for byte-reproducible reports");

  // selftest
  auto* self = app.add_subcommand("selftest", "run the invariant suites");
  bool calibrate = false;
  self->add_flag("--calibrate", calibrate, "measure the calibrated constants on the full corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*cap) {
      const EllipticOperator op = parse_op(op_spec);
      const double s = cap_spacing.empty() ? outer / 128.0 : parse_number(cap_spacing);
      const double v = cap_variational(Disk{{0.0, 0.0}, inner}, Disk{{0.0, 0.0}, outer}, op, {s, Point{}});
      std::printf("cap_variational  %.10f  (spacing %g)\n", v, s);
      std::printf("cap_annular      %.10f\n", annular_capacity(inner, outer, op));
      if (op.is_laplace()) std::printf("closed_form      %.10f\n", cap_concentric_closed_form(inner, outer));
    } else if (*holes) {
      const ScenarioConfig cfg = load_config(config_path);
      const HoleFamily family = build_holes(cfg.domain, cfg.measure, cfg.op, h);
      const HolesReport rep = holes_report(family, spacing_for(cfg, h));
      std::printf("h=%d cubes=%zu holes=%zu min_radius=%.6g max_radius=%.6g total_capacity=%.6g resolvable=%s\n",
                  h, rep.cubes, rep.perforating, rep.min_radius, rep.max_radius, rep.total_capacity,
                  rep.resolvable ? "yes" : "no");
      if (!out_path.empty()) {
        write_text(out_path, holes_to_json(family));
      } else {
        std::cout << holes_to_json(family);
      }
    } else if (*solve) {
      const ScenarioConfig cfg = load_config(config_path);
      const double s = spacing_for(cfg, h);
      const HoleFamily family = build_holes(cfg.domain, cfg.measure, cfg.op, h);
      PerforatedOptions opt;
      opt.pin_nearest = cfg.pin_nearest;
      opt.cg.rel_tol = cfg.rel_tol;
      const PdeSolution sol = solve_dirichlet_perforated(cfg.domain, family, cfg.op, cfg.load, s, opt);
      const MeasureSpec mu0 = decompose(cfg.measure).mu0;
      std::printf("h=%d spacing=%g unknowns=%zu iterations=%d residual=%.3e time_ms=%.1f\n", h, s,
                  sol.u.grid.size(), sol.stats.iterations, sol.stats.relative_residual, sol.stats.wall_ms);
      std::printf("energy F_mu0(u_h)=%.10f  ||u_h||_L2=%.10f  kernels=%s threads=%zu\n",
                  energy_functional(sol.u, mu0, cfg.op), l2_norm(sol.u),
                  std::string(kernels::isa_name(kernels::active_isa())).c_str(), thread_count());
      if (!field_out.empty()) {
        if (field_out.size() > 4 && field_out.substr(field_out.size() - 4) == ".bin") {
          write_field_binary(sol.u, field_out);
        } else {
          write_field_csv(sol.u, field_out);
        }
      }
    } else if (*sweep) {
      const ScenarioConfig cfg = load_config(config_path);
      SweepOptions opt;
      opt.record_runtime = !deterministic;
      const SweepResult res = run_sweep(cfg, opt);
      emit_report(res.report, format == "json" ? ReportFormat::kJson : ReportFormat::kCsv, out_path);
      std::cout << report_csv(res.report);
      if (!res.report.all_ok()) {
        for (const auto& row : res.report.rows) {
          if (!row.ok) std::cerr << "h=" << row.h << " failed: " << row.error << '\n';
        }
        return kNumerical;
      }
    } else if (*self) {
      if (calibrate) {
        std::printf("lemma 1.2 ratio %.6g (committed %.6g)\n", lemma_12_ratio(100), calibration::kLemma12);
        std::printf("lemma 2.2 ratio %.6g (committed %.6g)\n", lemma_22_ratio(), calibration::kLemma22);
        std::printf("lemma 2.3 ratio %.6g (committed %.6g)\n", lemma_23_ratio(100), calibration::kLemma23);
        return kOk;
      }
      const SelftestSummary summary = selftest();
      std::cout << summary.text();
      return summary.all_passed() ? kOk : kNumerical;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
