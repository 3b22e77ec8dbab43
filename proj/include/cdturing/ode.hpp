#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "cdturing/model.hpp"

namespace cdturing {

/// Samples of a kinetic-system solution. `clipped` counts components that
/// undershot below -1e-12 and were reset to zero.
struct Trajectory {
  std::vector<double> times;
  std::vector<SpeciesState> states;
  ModelParams params;
  std::size_t clipped = 0;
};

/// Fixed-step classical RK4 from t = 0 to t_end. The final step is shortened
/// so the last sample lands on t_end exactly. Throws StepSizeError when the
/// state becomes non-finite, ValidationError on bad arguments.
Trajectory integrate_ode(const ModelParams& p, const SpeciesState& u0,
                         double t_end, double dt);

struct DescentReport {
  bool monotone = true;
  double max_increase = 0.0;
};

/// Lyapunov function along the trajectory, relative to the positive
/// equilibrium of traj.params. A step counts as descent if it rises by at
/// most `tolerance`.
DescentReport verify_lyapunov_descent(const Trajectory& traj,
                                      double tolerance = 1e-9);

/// CSV with header "t,u1,u2,u3", shortest round-trip double formatting.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace cdturing
