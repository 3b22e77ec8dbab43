#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cdturing/model.hpp"

namespace cdturing {

/// Rectangular lattice of nx x ny sites. The domain is
/// [0, (nx-1) dx] x [0, (ny-1) dy] with sites on its boundary.
struct Grid {
  int nx = 100;
  int ny = 100;
  double dx = 1.0;
  double dy = 1.0;

  double lx() const { return (nx - 1) * dx; }
  double ly() const { return (ny - 1) * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  bool operator==(const Grid&) const = default;
};

/// Throws ValidationError unless nx, ny >= 3 and dx == dy > 0.
void validate(const Grid& g);

/// One species on a grid, stored row-major: row j (y) holds sites i = 0..nx-1.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid_(g), values_(g.size(), fill) {}

  const Grid& grid() const { return grid_; }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  double mean() const;

  bool operator==(const Field&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * grid_.nx + i;
  }

  Grid grid_{};
  std::vector<double> values_;
};

using Fields = std::array<Field, 3>;

enum class Scheme { explicit_euler, semi_implicit };

const char* to_string(Scheme s);

struct SimConfig {
  double dt = 0.005;
  long steps = 40000;
  long snapshot_every = 40000;
  std::uint64_t seed = 20240101;
  double perturb_amplitude = 0.05;
  Scheme scheme = Scheme::explicit_euler;
  double picard_tol = 1e-12;
  int picard_max_iters = 50;
  bool reaction = true;  // false: pure (cross-)diffusion, F = 0

  bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& cfg);

/// Densities are clamped to at least this after every update.
inline constexpr double kPositivityFloor = 1e-6;
/// Values above this (or non-finite) abort the run.
inline constexpr double kBlowUpLimit = 1e6;

/// ubar plus independent uniform noise on [-amplitude, amplitude] per site and
/// species, from std::mt19937_64(seed). Draw order: species 1, 2, 3; within a
/// species row-major. Sites below the positivity floor are raised to it and
/// counted in `clamped` when given.
Fields initial_condition(const ModelParams& p, const Grid& g,
                         std::uint64_t seed, double amplitude,
                         std::size_t* clamped = nullptr);

/// Nine-point Laplacian with every out-of-domain neighbour replaced by its
/// mirror image across the boundary site row (u(-1, j) = u(1, j)).
Field nine_point_laplacian(const Field& f);

/// Integral of the field with trapezoid weights: the quantity the reflected
/// stencil conserves.
double discrete_mass(const Field& f);

struct StepDiagnostics {
  std::size_t clamps = 0;
  std::size_t picard_failures = 0;
  std::size_t picard_iterations = 0;
};

/// Advances u_t = Lap K(u) + F(u) in place, reusing scratch buffers between
/// steps. Throws BlowUpError.
class Stepper {
 public:
  Stepper(const ModelParams& p, const Grid& g, const SimConfig& cfg);

  void advance(Fields& u);
  const StepDiagnostics& diagnostics() const { return diag_; }

 private:
  void rate(const Fields& u, Fields& out);

  ModelParams params_;
  Grid grid_;
  SimConfig cfg_;
  StepDiagnostics diag_;
  std::vector<int> xm_, xp_, ym_, yp_;
  Fields flux_, rate_, iterate_, next_;
};

/// One step from `u`; diagnostics accumulate into `diag` when given.
Fields step(const Fields& u, const ModelParams& p, const SimConfig& cfg,
            StepDiagnostics* diag = nullptr);

struct Snapshot {
  long step = 0;
  Fields fields;
};

struct SimResult {
  std::vector<Snapshot> snapshots;
  Fields final;
  StepDiagnostics diagnostics;
  std::size_t initial_clamps = 0;
};

using ProgressFn = std::function<void(long step, long total)>;

/// initial_condition, then cfg.steps steps; a snapshot every
/// cfg.snapshot_every steps. BlowUpError messages carry the step index.
SimResult simulate(const ModelParams& p, const Grid& g, const SimConfig& cfg,
                   const ProgressFn& progress = {});

/// As simulate, from caller-supplied initial fields.
SimResult simulate_from(const ModelParams& p, Fields initial,
                        const SimConfig& cfg, const ProgressFn& progress = {});

}  // namespace cdturing
