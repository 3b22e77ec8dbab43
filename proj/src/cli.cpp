#include "cdturing/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cdturing/analysis.hpp"
#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"
#include "cdturing/ode.hpp"
#include "cdturing/output.hpp"
#include "cdturing/pde.hpp"
#include "cdturing/stability.hpp"

namespace cdturing {

namespace fs = std::filesystem;

namespace {

std::ofstream open_file(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_manifest(const RunConfig& cfg) {
  auto out = open_file(fs::path(cfg.output.dir) / "manifest.txt");
  out << format_config(cfg);
}

std::string sig12(double v) { return format_significant(v, 12); }

void run_equilibrium(const RunConfig& cfg, std::ostream& out) {
  const ModelParams& p = cfg.model;
  const double abc = p.a * p.b * p.c;
  const double rhs = std::max(p.e * (p.b - p.a), p.d * (p.a - p.b));
  const bool holds = check_existence(p);
  out << "abc = " << sig12(abc) << "\n"
      << "max{e(b-a), d(a-b)} = " << sig12(rhs) << "\n"
      << "existence_condition = " << (holds ? "holds" : "fails") << "\n";
  const SpeciesState u = positive_equilibrium(p);
  out << "u1 = " << sig12(u.u1) << "\n"
      << "u2 = " << sig12(u.u2) << "\n"
      << "u3 = " << sig12(u.u3) << "\n";
}

void run_ode(const RunConfig& cfg, std::ostream& out) {
  const Trajectory traj =
      integrate_ode(cfg.model, cfg.ode.u0, cfg.ode.t_end, cfg.ode.dt);
  {
    auto csv = open_file(fs::path(cfg.output.dir) / "trajectory.csv");
    write_trajectory_csv(csv, traj);
  }
  const SpeciesState ubar = positive_equilibrium(cfg.model);
  const SpeciesState& last = traj.states.back();
  const double dist =
      (last.vec() - ubar.vec()).lpNorm<Eigen::Infinity>();
  out << "samples = " << traj.states.size() << "\n"
      << "final = " << format_double(last.u1) << ", " << format_double(last.u2)
      << ", " << format_double(last.u3) << "\n"
      << "distance_to_equilibrium = " << format_double(dist) << "\n"
      << "clipped = " << traj.clipped << "\n";
  bool interior = true;
  for (const auto& s : traj.states) {
    interior = interior && s.u1 > 0.0 && s.u2 > 0.0 && s.u3 > 0.0;
  }
  if (interior) {
    const DescentReport rep = verify_lyapunov_descent(traj);
    out << "lyapunov_monotone = " << (rep.monotone ? "true" : "false") << "\n"
        << "lyapunov_max_increase = " << format_double(rep.max_increase)
        << "\n";
  } else {
    out << "lyapunov_monotone = skipped (trajectory touches the boundary)\n";
  }
}

void run_dispersion(const RunConfig& cfg, std::ostream& out) {
  const auto mus = cfg.mu_set();
  const DispersionCurve vs_param = dispersion_vs_parameter(
      cfg.model, cfg.sweep.param, cfg.sweep.values, mus);
  {
    auto csv = open_file(fs::path(cfg.output.dir) / "dispersion.csv");
    write_dispersion_csv(csv, vs_param);
  }
  {
    auto csv = open_file(fs::path(cfg.output.dir) / "dispersion_mu.csv");
    write_dispersion_csv(csv, dispersion_vs_wavenumber(cfg.model, mus));
  }
  std::vector<double> probe{0.0, 1.0, 10.0};
  if (const auto iv = unstable_mu_interval(cfg.model);
      iv && std::isfinite(iv->mu_hi)) {
    probe.push_back(0.5 * (iv->mu_lo + iv->mu_hi));
  }
  std::sort(probe.begin(), probe.end());
  write_stability_table(out, cfg.model, probe);
  out << "dispersion rows = " << vs_param.points.size() << " over "
      << mus.size() << " wavenumbers (" << to_string(cfg.sweep.mu_mode) << ")\n";
}

void run_threshold(const RunConfig& cfg, std::ostream& out) {
  const auto& s = cfg.sweep;
  const double cont = turing_threshold(cfg.model, s.param, s.lo, s.hi, s.tol);
  const auto mus = cfg.mu_set();
  const double restricted =
      turing_threshold_on(cfg.model, s.param, s.lo, s.hi, s.tol, mus);
  out << "param = " << to_string(s.param) << "\n"
      << "bracket = [" << format_double(s.lo) << ", " << format_double(s.hi)
      << "]\n"
      << "tol = " << format_double(s.tol) << "\n"
      << "delta_continuous = " << format_double(cont) << "\n"
      << "delta_on_mu_set = " << format_double(restricted) << " ("
      << to_string(s.mu_mode) << ", " << mus.size() << " wavenumbers)\n";
}

SnapshotFiles snapshot_files(const OutputOptions& o) {
  SnapshotFiles what;
  what.raster = o.raster != RasterKind::none;
  what.format = o.raster == RasterKind::p2 ? PgmFormat::ascii_p2
                                           : PgmFormat::binary_p5;
  what.dump = o.dump;
  return what;
}

void run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const long report_every = std::max<long>(1, cfg.sim.steps / 10);
  const SimResult res =
      simulate(cfg.model, cfg.grid, cfg.sim, [&](long k, long total) {
        if (k % report_every == 0 || k == total) {
          log << "step " << k << "/" << total << "\n";
        }
      });
  const fs::path dir(cfg.output.dir);
  const SnapshotFiles what = snapshot_files(cfg.output);
  for (const auto& snap : res.snapshots) {
    write_snapshot(dir, snap.step, snap.fields, what);
  }
  write_manifest(cfg);

  const PatternMetrics m = pattern_metrics(res.final[0], cfg.sweep.rel_threshold);
  out << "u1_min = " << format_double(res.final[0].min()) << "\n"
      << "u1_max = " << format_double(res.final[0].max()) << "\n"
      << "amplitude = " << format_double(m.amplitude) << "\n"
      << "mean = " << format_double(m.mean) << "\n"
      << "spot_count = " << m.spot_count << "\n"
      << "classification = " << to_string(m.classification) << "\n"
      << "snapshots = " << res.snapshots.size() << "\n"
      << "initial_clamps = " << res.initial_clamps << "\n"
      << "clamps = " << res.diagnostics.clamps << "\n"
      << "picard_failures = " << res.diagnostics.picard_failures << "\n";
  if (cfg.sim.perturb_amplitude == 0.0) {
    out << "note = zero perturbation amplitude; the state stays at the "
           "homogeneous equilibrium\n";
  }
}

void run_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto records = bifurcation_sweep(
      cfg.model, cfg.grid, cfg.sim, cfg.sweep.param, cfg.sweep.values,
      cfg.sweep.rel_threshold, cfg.sweep.threads);
  const fs::path dir(cfg.output.dir);
  {
    auto csv = open_file(dir / "sweep.csv");
    write_sweep_csv(csv, records);
  }
  {
    auto meta = open_file(dir / "sweep_meta.txt");
    meta << "u1_extrema = final state of each run\n"
         << "classification_rel_threshold = "
         << format_double(cfg.sweep.rel_threshold) << "\n";
  }
  write_manifest(cfg);
  write_sweep_csv(out, records);
  const auto bad = upset_violations(records);
  if (!bad.empty()) {
    out << "warning = patterned set is not an up-set; homogeneous again at";
    for (double v : bad) out << ' ' << format_double(v);
    out << "\n";
  }
}

}  // namespace

std::optional<Subcommand> subcommand_from_string(std::string_view name) {
  for (auto cmd : {Subcommand::equilibrium, Subcommand::ode,
                   Subcommand::dispersion, Subcommand::threshold,
                   Subcommand::simulate, Subcommand::sweep}) {
    if (name == to_string(cmd)) return cmd;
  }
  return std::nullopt;
}

const char* to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::equilibrium:
      return "equilibrium";
    case Subcommand::ode:
      return "ode";
    case Subcommand::dispersion:
      return "dispersion";
    case Subcommand::threshold:
      return "threshold";
    case Subcommand::simulate:
      return "simulate";
    case Subcommand::sweep:
      return "sweep";
  }
  return "?";
}

void dispatch(const RunConfig& cfg, Subcommand cmd, std::ostream& out,
              std::ostream& log) {
  switch (cmd) {
    case Subcommand::equilibrium:
      run_equilibrium(cfg, out);
      break;
    case Subcommand::ode:
      run_ode(cfg, out);
      break;
    case Subcommand::dispersion:
      run_dispersion(cfg, out);
      break;
    case Subcommand::threshold:
      run_threshold(cfg, out);
      break;
    case Subcommand::simulate:
      run_simulate(cfg, out, log);
      break;
    case Subcommand::sweep:
      run_sweep(cfg, out);
      break;
  }
}

int exit_code_for(const std::exception& err) {
  if (const auto* e = dynamic_cast<const Error*>(&err)) return e->exit_code();
  if (dynamic_cast<const fs::filesystem_error*>(&err)) return 9;
  return 1;
}

std::string error_line(const std::exception& err) {
  const auto* e = dynamic_cast<const Error*>(&err);
  std::string msg = err.what();
  std::string escaped;
  for (char ch : msg) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += (ch == '\n') ? ' ' : ch;
  }
  std::ostringstream line;
  line << "error kind=" << (e ? e->kind() : "InternalError")
       << " code=" << exit_code_for(err) << " message=\"" << escaped << "\"";
  return line.str();
}

std::string exit_code_table() {
  return "Exit codes:\n"
         "  0  success\n"
         "  1  internal error\n"
         "  2  ParseError: malformed configuration\n"
         "  3  ValidationError: a configuration value violates an invariant\n"
         "  4  ConditionViolated: no positive equilibrium (abc <= max{e(b-a), "
         "d(a-b)})\n"
         "  5  DomainError: Lyapunov diagnostics on a non-positive state\n"
         "  6  StepSizeError: ODE state became non-finite\n"
         "  7  BracketError: threshold bracket does not straddle the onset\n"
         "  8  BlowUpError: PDE solution exceeded 1e6 or became non-finite\n"
         "  9  IoError: an output file could not be written\n";
}

}  // namespace cdturing
