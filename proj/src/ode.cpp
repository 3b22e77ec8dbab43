#include "cdturing/ode.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

constexpr double kClipThreshold = -1e-12;

Vec3 rhs(const ModelParams& p, const Vec3& u) {
  return reaction(p, SpeciesState::from(u));
}

Vec3 rk4_step(const ModelParams& p, const Vec3& u, double h) {
  const Vec3 k1 = rhs(p, u);
  const Vec3 k2 = rhs(p, u + 0.5 * h * k1);
  const Vec3 k3 = rhs(p, u + 0.5 * h * k2);
  const Vec3 k4 = rhs(p, u + h * k3);
  return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate_ode(const ModelParams& p, const SpeciesState& u0,
                         double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("dt must be a finite value > 0");
  }
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be finite and >= dt");
  }
  if (!(u0.u1 >= 0.0 && u0.u2 >= 0.0 && u0.u3 >= 0.0)) {
    throw ValidationError("initial state must be nonnegative");
  }

  // Step count chosen so that n*dt covers t_end up to round-off.
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

  Trajectory traj;
  traj.params = p;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  Vec3 u = u0.vec();
  for (std::size_t i = 1; i <= n; ++i) {
    const double t_prev = static_cast<double>(i - 1) * dt;
    const double t = (i == n) ? t_end : static_cast<double>(i) * dt;
    u = rk4_step(p, u, t - t_prev);
    for (int s = 0; s < 3; ++s) {
      if (!std::isfinite(u[s])) {
        throw StepSizeError("state became non-finite at t = " +
                            format_double(t) + "; reduce dt");
      }
      if (u[s] < kClipThreshold) {
        u[s] = 0.0;
        ++traj.clipped;
      }
    }
    traj.times.push_back(t);
    traj.states.push_back(SpeciesState::from(u));
  }
  return traj;
}

DescentReport verify_lyapunov_descent(const Trajectory& traj,
                                      double tolerance) {
  DescentReport report;
  if (traj.states.empty()) return report;
  const SpeciesState ubar = positive_equilibrium(traj.params);
  double prev = lyapunov_value(traj.params, ubar, traj.states.front());
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double v = lyapunov_value(traj.params, ubar, traj.states[i]);
    const double rise = v - prev;
    report.max_increase = std::max(report.max_increase, rise);
    if (rise > tolerance) report.monotone = false;
    prev = v;
  }
  return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,u1,u2,u3\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& s = traj.states[i];
    out << format_double(traj.times[i]) << ',' << format_double(s.u1) << ','
        << format_double(s.u2) << ',' << format_double(s.u3) << '\n';
  }
}

}  // namespace cdturing
