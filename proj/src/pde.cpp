#include "cdturing/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

// Neighbour index tables with mirror reflection at both ends.
void reflected_neighbours(int n, std::vector<int>& minus,
                          std::vector<int>& plus) {
  minus.resize(n);
  plus.resize(n);
  for (int i = 0; i < n; ++i) {
    minus[i] = (i == 0) ? 1 : i - 1;
    plus[i] = (i == n - 1) ? n - 2 : i + 1;
  }
}

void laplacian_into(const Field& f, Field& out, const std::vector<int>& xm,
                    const std::vector<int>& xp, const std::vector<int>& ym,
                    const std::vector<int>& yp) {
  const Grid& g = f.grid();
  const double scale = 1.0 / (6.0 * g.dx * g.dx);
  const auto v = f.values();
  auto o = out.values();
  const std::size_t nx = g.nx;
  for (int j = 0; j < g.ny; ++j) {
    const double* row = v.data() + j * nx;
    const double* down = v.data() + ym[j] * nx;
    const double* up = v.data() + yp[j] * nx;
    double* dst = o.data() + j * nx;
    for (int i = 0; i < g.nx; ++i) {
      const int w = xm[i];
      const int e = xp[i];
      const double edges = row[w] + row[e] + down[i] + up[i];
      const double corners = down[w] + down[e] + up[w] + up[e];
      dst[i] = scale * (4.0 * edges + corners - 20.0 * row[i]);
    }
  }
}

// Uniform on [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_grid_match(const Fields& u) {
  const Grid& g = u[0].grid();
  if (!(u[1].grid() == g) || !(u[2].grid() == g) || u[0].values().size() != g.size()) {
    throw ValidationError("species fields must share one grid");
  }
}

}  // namespace

void validate(const Grid& g) {
  if (g.nx < 3 || g.ny < 3) throw ValidationError("grid needs nx, ny >= 3");
  if (!(g.dx > 0.0) || !std::isfinite(g.dx)) {
    throw ValidationError("grid spacing dx must be > 0");
  }
  if (g.dx != g.dy) {
    throw ValidationError("nine-point stencil requires square cells, dx == dy");
  }
}

double Field::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double Field::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double Field::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

const char* to_string(Scheme s) {
  return s == Scheme::explicit_euler ? "explicit" : "semi-implicit";
}

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw ValidationError("sim.dt must be > 0");
  }
  if (cfg.steps <= 0) throw ValidationError("sim.steps must be positive");
  if (cfg.snapshot_every <= 0 || cfg.snapshot_every > cfg.steps) {
    throw ValidationError("sim.snapshot_every must lie in [1, steps]");
  }
  if (!(cfg.perturb_amplitude >= 0.0) || !std::isfinite(cfg.perturb_amplitude)) {
    throw ValidationError("sim.amplitude must be >= 0");
  }
  if (!(cfg.picard_tol > 0.0)) throw ValidationError("sim.picard_tol must be > 0");
  if (cfg.picard_max_iters <= 0) {
    throw ValidationError("sim.picard_max_iters must be positive");
  }
}

Fields initial_condition(const ModelParams& p, const Grid& g,
                         std::uint64_t seed, double amplitude,
                         std::size_t* clamped) {
  validate(g);
  if (!(amplitude >= 0.0)) throw ValidationError("amplitude must be >= 0");
  const Vec3 ubar = positive_equilibrium(p).vec();
  std::mt19937_64 rng(seed);
  std::size_t floor_hits = 0;
  Fields u;
  for (int s = 0; s < 3; ++s) {
    u[s] = Field(g, ubar[s]);
    for (double& v : u[s].values()) {
      const double eta = amplitude * (2.0 * unit_uniform(rng) - 1.0);
      v = ubar[s] + eta;
      if (v < kPositivityFloor) {
        v = kPositivityFloor;
        ++floor_hits;
      }
    }
  }
  if (clamped) *clamped = floor_hits;
  return u;
}

Field nine_point_laplacian(const Field& f) {
  validate(f.grid());
  std::vector<int> xm, xp, ym, yp;
  reflected_neighbours(f.grid().nx, xm, xp);
  reflected_neighbours(f.grid().ny, ym, yp);
  Field out(f.grid());
  laplacian_into(f, out, xm, xp, ym, yp);
  return out;
}

double discrete_mass(const Field& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      row += wx * f(i, j);
    }
    total += wy * row;
  }
  return total * g.dx * g.dy;
}

Stepper::Stepper(const ModelParams& p, const Grid& g, const SimConfig& cfg)
    : params_(p), grid_(g), cfg_(cfg) {
  validate(g);
  validate(cfg);
  reflected_neighbours(g.nx, xm_, xp_);
  reflected_neighbours(g.ny, ym_, yp_);
  for (int s = 0; s < 3; ++s) {
    flux_[s] = Field(g);
    rate_[s] = Field(g);
    iterate_[s] = Field(g);
    next_[s] = Field(g);
  }
}

void Stepper::rate(const Fields& u, Fields& out) {
  // Same arithmetic as diffusion_flux and reaction, unrolled per site.
  const ModelParams& p = params_;
  const double k11 = p.k11(), k13 = p.k13(), k22 = p.k22(), k23 = p.k23();
  const double k31 = p.k31(), k32 = p.k32(), k33 = p.k33();
  const std::size_t n = grid_.size();
  const double* u1 = u[0].values().data();
  const double* u2 = u[1].values().data();
  const double* u3 = u[2].values().data();
  double* w1 = flux_[0].values().data();
  double* w2 = flux_[1].values().data();
  double* w3 = flux_[2].values().data();
  for (std::size_t k = 0; k < n; ++k) {
    w1[k] = (k11 + k13 * u3[k]) * u1[k];
    w2[k] = (k22 + k23 * u3[k]) * u2[k];
    w3[k] = (k31 * u1[k] + k32 * u2[k] + k33) * u3[k];
  }
  for (int s = 0; s < 3; ++s) {
    laplacian_into(flux_[s], out[s], xm_, xp_, ym_, yp_);
  }
  if (!cfg_.reaction) return;
  double* r1 = out[0].values().data();
  double* r2 = out[1].values().data();
  double* r3 = out[2].values().data();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = u1[k], y = u2[k], z = u3[k];
    r1[k] += p.a * x * (1.0 - x) - x * z;
    r2[k] += p.b * y * (1.0 - y) - y * z;
    r3[k] += -p.c * z * z + (p.d * x + p.e * y) * z;
  }
}

void Stepper::advance(Fields& u) {
  require_grid_match(u);
  if (!(u[0].grid() == grid_)) {
    throw ValidationError("fields do not match the stepper grid");
  }
  const double dt = cfg_.dt;
  const std::size_t n = grid_.size();

  if (cfg_.scheme == Scheme::explicit_euler) {
    rate(u, rate_);
    for (int s = 0; s < 3; ++s) {
      auto dst = next_[s].values();
      const auto src = u[s].values();
      const auto r = rate_[s].values();
      for (std::size_t k = 0; k < n; ++k) dst[k] = src[k] + dt * r[k];
    }
  } else {
    // Picard iteration on u^{n+1} = u^n + dt (Lap K(u*) + F(u*)).
    for (int s = 0; s < 3; ++s) iterate_[s] = u[s];
    bool converged = false;
    for (int it = 0; it < cfg_.picard_max_iters; ++it) {
      rate(iterate_, rate_);
      double change = 0.0;
      for (int s = 0; s < 3; ++s) {
        auto dst = next_[s].values();
        const auto src = u[s].values();
        const auto r = rate_[s].values();
        const auto prev = iterate_[s].values();
        for (std::size_t k = 0; k < n; ++k) {
          dst[k] = src[k] + dt * r[k];
          change = std::max(change, std::abs(dst[k] - prev[k]));
        }
      }
      ++diag_.picard_iterations;
      std::swap(iterate_, next_);
      if (!std::isfinite(change)) break;
      if (change < cfg_.picard_tol) {
        converged = true;
        break;
      }
    }
    if (!converged) ++diag_.picard_failures;
    std::swap(iterate_, next_);
  }

  for (int s = 0; s < 3; ++s) {
    for (double& v : next_[s].values()) {
      if (!std::isfinite(v) || v > kBlowUpLimit) {
        throw BlowUpError("solution exceeded " + format_double(kBlowUpLimit) +
                          " or became non-finite in species " +
                          std::to_string(s + 1));
      }
      if (v < kPositivityFloor) {
        v = kPositivityFloor;
        ++diag_.clamps;
      }
    }
  }
  std::swap(u, next_);
}

Fields step(const Fields& u, const ModelParams& p, const SimConfig& cfg,
            StepDiagnostics* diag) {
  Stepper stepper(p, u[0].grid(), cfg);
  Fields out = u;
  stepper.advance(out);
  if (diag) {
    diag->clamps += stepper.diagnostics().clamps;
    diag->picard_failures += stepper.diagnostics().picard_failures;
    diag->picard_iterations += stepper.diagnostics().picard_iterations;
  }
  return out;
}

SimResult simulate_from(const ModelParams& p, Fields initial,
                        const SimConfig& cfg, const ProgressFn& progress) {
  require_grid_match(initial);
  Stepper stepper(p, initial[0].grid(), cfg);
  SimResult result;
  result.final = std::move(initial);
  for (long k = 1; k <= cfg.steps; ++k) {
    try {
      stepper.advance(result.final);
    } catch (const BlowUpError& err) {
      throw BlowUpError("step " + std::to_string(k) + ": " + err.what());
    }
    if (k % cfg.snapshot_every == 0) result.snapshots.push_back({k, result.final});
    if (progress) progress(k, cfg.steps);
  }
  result.diagnostics = stepper.diagnostics();
  return result;
}

SimResult simulate(const ModelParams& p, const Grid& g, const SimConfig& cfg,
                   const ProgressFn& progress) {
  validate(cfg);
  std::size_t clamps = 0;
  Fields init =
      initial_condition(p, g, cfg.seed, cfg.perturb_amplitude, &clamps);
  SimResult result = simulate_from(p, std::move(init), cfg, progress);
  result.initial_clamps = clamps;
  return result;
}

}  // namespace cdturing
