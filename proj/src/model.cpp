#include "cdturing/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdturing/errors.hpp"

namespace cdturing {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be a finite value > 0");
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be a finite value >= 0");
  }
}

void require_positive_state(const SpeciesState& u, const char* what) {
  if (!(u.u1 > 0.0 && u.u2 > 0.0 && u.u3 > 0.0)) {
    throw DomainError(std::string(what) +
                      ": every component must be strictly positive");
  }
}

double entropy_term(double u, double ubar) {
  return u - ubar - ubar * std::log(u / ubar);
}

}  // namespace

void validate(const ModelParams& p) {
  require_positive(p.a, "a");
  require_positive(p.b, "b");
  require_positive(p.c, "c");
  require_positive(p.d, "d");
  require_positive(p.e, "e");
  require_positive(p.k11(), "k11");
  require_positive(p.k22(), "k22");
  require_positive(p.k33(), "k33");
  require_nonnegative(p.k13(), "k13");
  require_nonnegative(p.k23(), "k23");
  require_nonnegative(p.k31(), "k31");
  require_nonnegative(p.k32(), "k32");
  if (p.k[0][1] != 0.0 || p.k[1][0] != 0.0) {
    throw ValidationError("k12 and k21 must be zero");
  }
}

ModelParams paper_params(double k32) {
  ModelParams p;
  p.a = 1.0;
  p.b = 1.0;
  p.c = 0.1;
  p.d = 0.1;
  p.e = 0.1;
  p.k[0][0] = 0.1;
  p.k[0][2] = 0.1;
  p.k[1][1] = 0.1;
  p.k[1][2] = 0.1;
  p.k[2][0] = 0.1;
  p.k[2][1] = k32;
  p.k[2][2] = 0.1;
  return p;
}

bool check_existence(const ModelParams& p) {
  const double abc = p.a * p.b * p.c;
  return abc > std::max(p.e * (p.b - p.a), p.d * (p.a - p.b));
}

SpeciesState positive_equilibrium(const ModelParams& p) {
  if (!check_existence(p)) {
    throw ConditionViolated(
        "existence condition abc > max{e(b-a), d(a-b)} fails");
  }
  const double abc = p.a * p.b * p.c;
  const double den = abc + p.b * p.d + p.a * p.e;
  return {(abc + p.a * p.e - p.b * p.e) / den,
          (abc + p.b * p.d - p.a * p.d) / den,
          p.a * p.b * (p.d + p.e) / den};
}

Vec3 reaction(const ModelParams& p, const SpeciesState& u) {
  return {p.a * u.u1 * (1.0 - u.u1) - u.u1 * u.u3,
          p.b * u.u2 * (1.0 - u.u2) - u.u2 * u.u3,
          -p.c * u.u3 * u.u3 + (p.d * u.u1 + p.e * u.u2) * u.u3};
}

Mat3 reaction_jacobian(const ModelParams& p, const SpeciesState& u) {
  Mat3 j;
  j << p.a * (1.0 - 2.0 * u.u1) - u.u3, 0.0, -u.u1,
      0.0, p.b * (1.0 - 2.0 * u.u2) - u.u3, -u.u2,
      p.d * u.u3, p.e * u.u3, -2.0 * p.c * u.u3 + p.d * u.u1 + p.e * u.u2;
  return j;
}

Vec3 diffusion_flux(const ModelParams& p, const SpeciesState& u) {
  return {(p.k11() + p.k13() * u.u3) * u.u1,
          (p.k22() + p.k23() * u.u3) * u.u2,
          (p.k31() * u.u1 + p.k32() * u.u2 + p.k33()) * u.u3};
}

Mat3 diffusion_jacobian(const ModelParams& p, const SpeciesState& u) {
  Mat3 j;
  j << p.k11() + p.k13() * u.u3, 0.0, p.k13() * u.u1,
      0.0, p.k22() + p.k23() * u.u3, p.k23() * u.u2,
      p.k31() * u.u3, p.k32() * u.u3,
      p.k33() + p.k31() * u.u1 + p.k32() * u.u2;
  return j;
}

double lyapunov_value(const ModelParams& p, const SpeciesState& ubar,
                      const SpeciesState& u) {
  require_positive_state(ubar, "lyapunov_value equilibrium");
  require_positive_state(u, "lyapunov_value state");
  return p.d * entropy_term(u.u1, ubar.u1) + p.e * entropy_term(u.u2, ubar.u2) +
         entropy_term(u.u3, ubar.u3);
}

double lyapunov_derivative(const ModelParams& p, const SpeciesState& ubar,
                           const SpeciesState& u) {
  require_positive_state(ubar, "lyapunov_derivative equilibrium");
  require_positive_state(u, "lyapunov_derivative state");
  const double x1 = u.u1 - ubar.u1;
  const double x2 = u.u2 - ubar.u2;
  const double x3 = u.u3 - ubar.u3;
  return -p.a * p.d * x1 * x1 - p.b * p.e * x2 * x2 - p.c * x3 * x3;
}

}  // namespace cdturing
