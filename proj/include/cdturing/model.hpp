#pragma once

#include <array>

#include <Eigen/Dense>

namespace cdturing {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Kinetic rates and the diffusion table of the two-prey one-predator model.
///
/// The diffusion table is indexed from zero: `k[0][2]` is k13, the response
/// of prey 1 to the predator. k12 and k21 do not appear in the model and are
/// required to be zero.
struct ModelParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  std::array<std::array<double, 3>, 3> k{};

  double k11() const { return k[0][0]; }
  double k13() const { return k[0][2]; }
  double k22() const { return k[1][1]; }
  double k23() const { return k[1][2]; }
  double k31() const { return k[2][0]; }
  double k32() const { return k[2][1]; }
  double k33() const { return k[2][2]; }

  bool operator==(const ModelParams&) const = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const ModelParams& p);

/// a = b = 1, c = d = e = 0.1, every listed k = 0.1 and the given k32.
ModelParams paper_params(double k32 = 2.0);

/// Population densities (u1, u2, u3).
struct SpeciesState {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  Vec3 vec() const { return {u1, u2, u3}; }
  static SpeciesState from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  bool operator==(const SpeciesState&) const = default;
};

/// abc > max{e(b - a), d(a - b)}.
bool check_existence(const ModelParams& p);

/// Closed-form positive equilibrium. Throws ConditionViolated when
/// check_existence fails.
SpeciesState positive_equilibrium(const ModelParams& p);

/// F(u): logistic prey with predation, quadratic predator closure.
Vec3 reaction(const ModelParams& p, const SpeciesState& u);
Mat3 reaction_jacobian(const ModelParams& p, const SpeciesState& u);

/// K(u), the vector the Laplacian acts on.
Vec3 diffusion_flux(const ModelParams& p, const SpeciesState& u);
Mat3 diffusion_jacobian(const ModelParams& p, const SpeciesState& u);

// Lyapunov diagnostics. Both throw DomainError for non-positive components.
double lyapunov_value(const ModelParams& p, const SpeciesState& ubar,
                      const SpeciesState& u);
double lyapunov_derivative(const ModelParams& p, const SpeciesState& ubar,
                           const SpeciesState& u);

}  // namespace cdturing
