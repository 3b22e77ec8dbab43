// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass --quick to skip the full-scale pattern runs.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cdturing/analysis.hpp"
#include "cdturing/cli.hpp"
#include "cdturing/config.hpp"
#include "cdturing/format.hpp"
#include "cdturing/model.hpp"
#include "cdturing/ode.hpp"
#include "cdturing/pde.hpp"
#include "cdturing/stability.hpp"

using namespace cdturing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) { return format_significant(v, 6); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Kinetic rates in (0.05, 2] with a positive equilibrium.
ModelParams random_kinetics(std::mt19937_64& rng) {
  ModelParams p;
  do {
    p.a = uniform(rng, 0.05, 2.0);
    p.b = uniform(rng, 0.05, 2.0);
    p.c = uniform(rng, 0.05, 2.0);
    p.d = uniform(rng, 0.05, 2.0);
    p.e = uniform(rng, 0.05, 2.0);
  } while (!check_existence(p));
  return p;
}

Outcome equilibrium_exactness() {
  const SpeciesState u = positive_equilibrium(paper_params());
  const double err = std::max({std::abs(u.u1 - 1.0 / 3.0),
                               std::abs(u.u2 - 1.0 / 3.0),
                               std::abs(u.u3 - 2.0 / 3.0)});
  return {err <= 1e-12, "max error " + num(err)};
}

Outcome global_ode_stability() {
  const ModelParams p = paper_params();
  const Vec3 ubar = positive_equilibrium(p).vec();
  std::mt19937_64 rng(7);
  double worst_dist = 0.0;
  double worst_rise = 0.0;
  int failures = 0;
  for (int run = 0; run < 100; ++run) {
    SpeciesState u0{uniform(rng, 0.05, 2.0), uniform(rng, 0.05, 2.0),
                    uniform(rng, 0.05, 2.0)};
    const Trajectory traj = integrate_ode(p, u0, 500.0, 0.01);
    const double dist =
        (traj.states.back().vec() - ubar).lpNorm<Eigen::Infinity>();
    const DescentReport rep = verify_lyapunov_descent(traj, 1e-9);
    worst_dist = std::max(worst_dist, dist);
    worst_rise = std::max(worst_rise, rep.max_increase);
    if (dist > 1e-4 || !rep.monotone) ++failures;
  }
  return {failures == 0, "100 starts, worst distance " + num(worst_dist) +
                             ", largest Lyapunov rise " + num(worst_rise)};
}

Outcome no_instability_without_cross() {
  std::mt19937_64 rng(11);
  std::vector<double> mus(2000);
  for (int i = 0; i < 2000; ++i) mus[i] = 1e3 * i / 1999.0;
  int bad = 0;
  for (int variant = 0; variant < 2; ++variant) {
    for (int s = 0; s < 50; ++s) {
      ModelParams p = random_kinetics(rng);
      p.k[0][0] = uniform(rng, 0.01, 5.0);
      p.k[1][1] = uniform(rng, 0.01, 5.0);
      p.k[2][2] = uniform(rng, 0.01, 5.0);
      if (variant == 1) {
        p.k[0][2] = uniform(rng, 0.01, 5.0);
        p.k[1][2] = uniform(rng, 0.01, 5.0);
      }
      for (double mu : mus) {
        if (!routh_hurwitz_stable(char_coeffs(p, mu))) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, "100 parameter sets x 2000 wavenumbers, " +
                        std::to_string(bad) + " sets not Routh-Hurwitz stable"};
}

Outcome cross_driven_instability() {
  const ModelParams p2 = paper_params(2.0);
  const auto iv = unstable_mu_interval(p2);
  bool ok = iv.has_value();
  std::string detail;
  if (iv) {
    const double mid = 0.5 * (iv->mu_lo + iv->mu_hi);
    const double growth = max_real_eigenvalue(p2, mid);
    ok = ok && growth > 0.0;
    detail = "k32=2 interval (" + num(iv->mu_lo) + ", " + num(iv->mu_hi) +
             "), growth at midpoint " + num(growth);
  } else {
    detail = "k32=2 has no unstable interval";
  }
  const bool absent_at_1 = !unstable_mu_interval(paper_params(1.0));
  ok = ok && absent_at_1;
  detail += absent_at_1 ? "; k32=1 stable" : "; k32=1 unstable";
  const auto mus = admissible_wavenumbers(40.0, 40.0, 50, 50);
  const double delta = turing_threshold_on(paper_params(), CrossCoeff::k32,
                                           0.1, 3.0, 1e-6, mus);
  ok = ok && delta >= 1.4 && delta <= 1.8;
  detail += "; lattice threshold " + num(delta);
  return {ok, detail};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(13);
  int mismatches = 0;
  int unstable = 0;
  int ties = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    // Even draws: random kinetics with strong predator cross-diffusion.
    // Odd draws: the paper's kinetics across the onset.
    ModelParams p = random_kinetics(rng);
    p.k[0][0] = uniform(rng, 0.01, 1.0);
    p.k[1][1] = uniform(rng, 0.01, 1.0);
    p.k[2][2] = uniform(rng, 0.01, 1.0);
    p.k[0][2] = uniform(rng, 0.0, 1.0);
    p.k[1][2] = uniform(rng, 0.0, 1.0);
    p.k[2][0] = uniform(rng, 0.0, 20.0);
    p.k[2][1] = uniform(rng, 0.0, 20.0);
    if (draw % 2) p = paper_params(uniform(rng, 0.5, 4.0));
    const double mu = uniform(rng, 0.0, draw % 2 ? 3.0 : 50.0);
    const CubicCoeffs cc = char_coeffs(p, mu);
    const double top = max_real_eigenvalue(p, mu);
    if (std::abs(top) < 1e-10) {
      ++ties;
      continue;
    }
    const bool grows = top > 0.0;
    const bool rh = routh_hurwitz_stable(cc);
    if (grows == rh) ++mismatches;
    if (cc.a0 < 0.0 && !grows) ++mismatches;
    if (grows) ++unstable;
  }
  return {mismatches == 0, "1000 draws (" + std::to_string(unstable) +
                               " unstable, " + std::to_string(ties) + " ties), " +
                               std::to_string(mismatches) + " disagreements"};
}

Outcome stencil_correctness() {
  const Grid g{12, 10, 0.3, 0.3};
  Field f(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = i * g.dx, y = j * g.dy;
      f(i, j) = 1.5 * x * x - 0.7 * x * y + 2.0 * y * y + x - 3.0 * y + 4.0;
    }
  }
  const Field lap = nine_point_laplacian(f);
  double quad_err = 0.0;
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      quad_err = std::max(quad_err, std::abs(lap(i, j) - 7.0));
    }
  }

  std::vector<double> errs;
  double symbol_gap = 0.0;
  for (int n : {17, 33, 65, 129}) {
    const double h = 1.0 / (n - 1);
    const Grid gn{n, n, h, h};
    Field u(gn);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        u(i, j) = std::cos(std::numbers::pi * i * h) *
                  std::cos(2.0 * std::numbers::pi * j * h);
      }
    }
    const Field l = nine_point_laplacian(u);
    const double k2 = 5.0 * std::numbers::pi * std::numbers::pi;
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) e = std::max(e, std::abs(l(i, j) + k2 * u(i, j)));
    }
    errs.push_back(e);
    // Exact error of the stencil on this mode, from its Fourier symbol.
    const double cx = std::cos(std::numbers::pi * h);
    const double cy = std::cos(2.0 * std::numbers::pi * h);
    const double symbol = -(20.0 - 8.0 * (cx + cy) - 4.0 * cx * cy) / (6.0 * h * h);
    symbol_gap = std::max(symbol_gap, std::abs(e - std::abs(symbol + k2)) / e);
  }
  std::vector<double> orders;
  std::string listed;
  bool ok = quad_err <= 1e-10;
  for (std::size_t k = 1; k < errs.size(); ++k) {
    orders.push_back(std::log2(errs[k - 1] / errs[k]));
    ok = ok && orders.back() >= 2.0;
    listed += (k > 1 ? ", " : "") + num(orders.back());
  }
  return {ok, "quadratic error " + num(quad_err) + ", orders " + listed +
                  " (errors match the stencil symbol to " + num(symbol_gap) +
                  " relative)"};
}

Outcome discrete_conservation() {
  ModelParams p = paper_params();
  p.a = p.b = p.c = p.d = p.e = 0.0;
  const Grid g{64, 64, 1.0, 1.0};
  std::mt19937_64 rng(17);
  Fields u;
  for (auto& f : u) {
    f = Field(g);
    for (double& v : f.values()) v = uniform(rng, 0.2, 1.0);
  }
  std::array<double, 3> before{};
  for (int s = 0; s < 3; ++s) before[s] = discrete_mass(u[s]);
  SimConfig cfg;
  cfg.reaction = false;
  cfg.steps = 1000;
  cfg.snapshot_every = 1000;
  const SimResult res = simulate_from(p, u, cfg);
  double drift = 0.0;
  for (int s = 0; s < 3; ++s) {
    drift = std::max(drift, std::abs(discrete_mass(res.final[s]) - before[s]) /
                                before[s]);
  }
  return {drift < 1e-8, "largest relative drift " + num(drift)};
}

Outcome linear_nonlinear_consistency() {
  const ModelParams p = paper_params(2.0);
  const double lx = 40.0;
  const Grid g{81, 81, 0.5, 0.5};
  int bm = 0, bn = 0;
  double best = -1e300;
  for (int m = 0; m <= 20; ++m) {
    for (int n = m; n <= 20; ++n) {
      const double mu = std::numbers::pi * std::numbers::pi *
                        (m * m + n * n) / (lx * lx);
      const double r = max_real_eigenvalue(p, mu);
      if (r > best) {
        best = r;
        bm = m;
        bn = n;
      }
    }
  }
  const double mu = std::numbers::pi * std::numbers::pi *
                    (bm * bm + bn * bn) / (lx * lx);
  Eigen::EigenSolver<Mat3> es(stability_matrix(p, mu));
  int lead = 0;
  for (int k = 1; k < 3; ++k) {
    if (es.eigenvalues()[k].real() > es.eigenvalues()[lead].real()) lead = k;
  }
  Vec3 v = es.eigenvectors().col(lead).real();
  v /= v.cwiseAbs().maxCoeff();

  const Vec3 ubar = positive_equilibrium(p).vec();
  const double eps = 5e-5;
  Field phi(g);
  Fields u;
  for (int s = 0; s < 3; ++s) u[s] = Field(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      phi(i, j) = std::cos(bm * std::numbers::pi * i * g.dx / lx) *
                  std::cos(bn * std::numbers::pi * j * g.dy / lx);
      for (int s = 0; s < 3; ++s) u[s](i, j) = ubar[s] + eps * v[s] * phi(i, j);
    }
  }
  const int s_ref = std::abs(v[0]) >= std::abs(v[2]) ? 0 : 2;
  auto coefficient = [&](const Fields& w) {
    double num_ = 0.0, den = 0.0;
    const auto a = w[s_ref].values();
    const auto b = phi.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
      num_ += (a[k] - ubar[s_ref]) * b[k];
      den += b[k] * b[k];
    }
    return num_ / den;
  };

  SimConfig cfg;
  cfg.dt = 0.005;
  Stepper stepper(p, g, cfg);
  const double t1 = 20.0, t2 = 200.0;
  double c1 = 0.0;
  double peak = 0.0;
  const long n1 = std::lround(t1 / cfg.dt), n2 = std::lround(t2 / cfg.dt);
  for (long k = 1; k <= n2; ++k) {
    stepper.advance(u);
    if (k == n1) c1 = coefficient(u);
    if (k % 1000 == 0) {
      for (int s = 0; s < 3; ++s) {
        peak = std::max({peak, u[s].max() - ubar[s], ubar[s] - u[s].min()});
      }
    }
  }
  const double c2 = coefficient(u);
  const double measured = std::log(c2 / c1) / (t2 - t1);
  const double rel = std::abs(measured - best) / best;
  const bool ok = c2 / c1 > 0.0 && rel <= 0.10 && peak < 1e-2;
  return {ok, "mode (" + std::to_string(bm) + "," + std::to_string(bn) +
                  ") mu " + num(mu) + ": predicted " + num(best) +
                  ", measured " + num(measured) + " (rel " + num(rel) +
                  "), peak deviation " + num(peak)};
}

struct Scale {
  const char* name;
  Grid grid;
  SimConfig sim;
};

std::vector<Scale> pattern_scales(bool quick) {
  std::vector<Scale> scales;
  if (!quick) {
    SimConfig full;  // 100x100, dt 0.005, 40000 steps, amplitude 0.05
    scales.push_back({"desk", Grid{}, full});
  }
  SimConfig ci;
  ci.steps = 10000;
  ci.snapshot_every = 10000;
  ci.perturb_amplitude = 0.01;
  scales.push_back({"ci", Grid{64, 64, 1.0, 1.0}, ci});
  return scales;
}

Outcome pattern_reproduction(bool quick) {
  bool ok = true;
  std::string detail;
  const double ubar1 = positive_equilibrium(paper_params()).u1;
  const std::vector<double> values{1.7, 1.8, 1.9, 2.0};
  for (const Scale& sc : pattern_scales(quick)) {
    const PatternMetrics on =
        pattern_metrics(simulate(paper_params(2.0), sc.grid, sc.sim).final[0]);
    const PatternMetrics off =
        pattern_metrics(simulate(paper_params(1.0), sc.grid, sc.sim).final[0]);
    const auto sweep = bifurcation_sweep(paper_params(), sc.grid, sc.sim,
                                         CrossCoeff::k32, values, 0.01, 1);
    // The amplitude bounds apply at desk scale; the CI variant only has to
    // reproduce the classifications.
    const bool desk = std::string(sc.name) == "desk";
    const bool on_ok = on.classification == Classification::patterned &&
                       (!desk || (on.amplitude > 0.1 * ubar1 && on.spot_count >= 5));
    const bool off_ok = off.classification == Classification::homogeneous &&
                        (!desk || off.amplitude < 1e-3);
    bool sweep_ok = upset_violations(sweep).empty();
    std::string swept;
    for (const auto& r : sweep) {
      sweep_ok = sweep_ok && r.metrics.classification == Classification::patterned;
      swept += " " + num(r.metrics.amplitude);
    }
    ok = ok && on_ok && off_ok && sweep_ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(sc.name) + ": k32=2 amplitude " + num(on.amplitude) +
              " spots " + std::to_string(on.spot_count) +
              ", k32=1 amplitude " + num(off.amplitude) + ", sweep amplitudes" +
              swept;
  }
  if (quick) detail += " (desk scale skipped)";
  return {ok, detail};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = buf.str();
  }
  return files;
}

Outcome determinism(bool quick) {
  const fs::path dir = fs::temp_directory_path() / "cdturing_acceptance_det";
  fs::remove_all(dir);
  std::vector<std::string> overrides{"output.dir=" + dir.string()};
  if (quick) {
    overrides.push_back("grid.nx=64");
    overrides.push_back("grid.ny=64");
    overrides.push_back("sim.steps=10000");
    overrides.push_back("sim.snapshot_every=5000");
  } else {
    overrides.push_back("sim.snapshot_every=20000");
  }
  const RunConfig cfg =
      parse_config("[model]\npreset = fig3-k20\n", overrides);
  std::ostringstream out1, out2, sink;
  dispatch(cfg, Subcommand::simulate, out1, sink);
  const auto first = read_tree(dir);

  const RunConfig again = parse_config(first.at("manifest.txt"));
  fs::remove_all(dir);
  dispatch(again, Subcommand::simulate, out2, sink);
  const auto second = read_tree(dir);
  fs::remove_all(dir);

  const bool ok = again == cfg && first == second && out1.str() == out2.str() &&
                  first.size() > 1;
  return {ok, std::to_string(first.size()) + " files compared, " +
                  (first == second ? "identical" : "different") +
                  ", report " + (out1.str() == out2.str() ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--quick") quick = true;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"equilibrium exactness", equilibrium_exactness},
      {"global ODE stability", global_ode_stability},
      {"no instability without cross-diffusion", no_instability_without_cross},
      {"cross-diffusion driven instability", cross_driven_instability},
      {"oracle equivalence", oracle_equivalence},
      {"stencil correctness", stencil_correctness},
      {"discrete conservation", discrete_conservation},
      {"linear to nonlinear consistency", linear_nonlinear_consistency},
      {"pattern reproduction", [quick] { return pattern_reproduction(quick); }},
      {"determinism", [quick] { return determinism(quick); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = checks[i].second();
    } catch (const std::exception& err) {
      r = {false, std::string("threw: ") + err.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    if (!r.ok) ++failed;
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", r.ok ? "PASS" : "FAIL", i + 1,
                checks[i].first.c_str(), r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
