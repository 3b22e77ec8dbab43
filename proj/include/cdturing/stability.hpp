#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cdturing/model.hpp"

namespace cdturing {

/// rho(lambda) = lambda^3 + a2 lambda^2 + a1 lambda + a0 at one wavenumber.
struct CubicCoeffs {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
};

/// a0 as a cubic in the wavenumber: a0(mu) = c3 mu^3 + c2 mu^2 + c1 mu + c0,
/// with a0(mu) = det(mu K_u - G_u). Instability at mu requires a0(mu) < 0.
struct DetCubic {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double mu) const {
    return ((c3 * mu + c2) * mu + c1) * mu + c0;
  }
};

/// Wavenumbers where a0 < 0. `mu_hi` is +inf when c3 < 0 and the set is
/// unbounded above.
struct UnstableInterval {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
};

enum class CrossCoeff { k31, k32 };

const char* to_string(CrossCoeff which);
CrossCoeff cross_coeff_from_string(const char* name);

/// Copy of `p` with the chosen cross-diffusion coefficient replaced.
ModelParams with_cross(const ModelParams& p, CrossCoeff which, double value);

struct DispersionPoint {
  double x = 0.0;
  double re_lambda_max = 0.0;
};

struct DispersionCurve {
  enum class Kind { wavenumber, parameter };
  Kind kind = Kind::parameter;
  std::vector<DispersionPoint> points;
};

/// -mu K_u(ubar) + G_u(ubar). Throws ConditionViolated without an equilibrium.
Mat3 stability_matrix(const ModelParams& p, double mu);

/// a2 = -tr M, a1 = sum of principal 2x2 minors, a0 = -det M, M as above.
CubicCoeffs char_coeffs(const ModelParams& p, double mu);

/// a2 > 0, a0 > 0 and a2 a1 - a0 > 0.
bool routh_hurwitz_stable(const CubicCoeffs& c);

/// All three roots of the monic cubic. Real roots have zero imaginary part.
std::array<std::complex<double>, 3> cubic_roots(const CubicCoeffs& c);

double max_real_root(const CubicCoeffs& c);
double max_real_eigenvalue(const ModelParams& p, double mu);

/// Exact coefficients of a0(mu), by expanding det(mu K - G) column-wise.
DetCubic det_cubic(const ModelParams& p);

/// Real roots of a DetCubic, ascending, from companion-matrix eigenvalues
/// with one Newton polish each. Pairs closer than 1e-8 (1 + |mu|) are a
/// double root and are both dropped.
std::vector<double> det_cubic_real_roots(const DetCubic& dc);

std::optional<UnstableInterval> unstable_mu_interval(const ModelParams& p);

/// Bisection for the cross-diffusion value at which an unstable wavenumber
/// interval first appears (any mu > 0). Throws BracketError unless the
/// instability is absent at `lo` and present at `hi`.
double turing_threshold(const ModelParams& p, CrossCoeff which, double lo,
                        double hi, double tol);

/// Same, with instability meaning max Re(lambda) > 0 for some mu in `mu_set`
/// (the wavenumbers a particular domain admits).
double turing_threshold_on(const ModelParams& p, CrossCoeff which, double lo,
                           double hi, double tol,
                           std::span<const double> mu_set);

/// Max over mu_set of max_real_eigenvalue, for each parameter value.
DispersionCurve dispersion_vs_parameter(const ModelParams& p, CrossCoeff which,
                                        std::span<const double> values,
                                        std::span<const double> mu_set);

/// max_real_eigenvalue at each wavenumber.
DispersionCurve dispersion_vs_wavenumber(const ModelParams& p,
                                         std::span<const double> mu_values);

/// pi^2 ((m/Lx)^2 + (n/Ly)^2) for m <= m_max, n <= n_max; sorted, distinct.
std::vector<double> admissible_wavenumbers(double lx, double ly, int m_max,
                                           int n_max);

void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve);

/// Human-readable table: DetCubic, then per-mu coefficients and verdicts.
void write_stability_table(std::ostream& out, const ModelParams& p,
                           std::span<const double> mu_values);

}  // namespace cdturing
