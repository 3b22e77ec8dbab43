#include "cdturing/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

constexpr double kRootTol = 1e-8;

double horner(const CubicCoeffs& c, double x) {
  return ((x + c.a2) * x + c.a1) * x + c.a0;
}

double horner_deriv(const CubicCoeffs& c, double x) {
  return (3.0 * x + 2.0 * c.a2) * x + c.a1;
}

// One real root of the monic cubic, branch chosen by the sign of the
// discriminant of the depressed form t^3 + p t + q.
double one_real_root(const CubicCoeffs& c) {
  const double shift = c.a2 / 3.0;
  const double p = c.a1 - c.a2 * shift;
  const double q = (2.0 * c.a2 * c.a2 / 27.0 - c.a1 / 3.0) * c.a2 + c.a0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  double t = 0.0;
  if (disc > 0.0) {
    const double w = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
    t = (w == 0.0) ? 0.0 : w - p / (3.0 * w);
  } else if (p < 0.0) {
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp(-0.5 * q / (r * r * r), -1.0, 1.0);
    t = 2.0 * r * std::cos(std::acos(arg) / 3.0);
  }
  double x = t - shift;

  // Newton polish; kept only while the residual improves.
  for (int it = 0; it < 4; ++it) {
    const double f = horner(c, x);
    const double df = horner_deriv(c, x);
    if (f == 0.0 || df == 0.0) break;
    const double next = x - f / df;
    if (!(std::abs(horner(c, next)) < std::abs(f))) break;
    x = next;
  }
  return x;
}

Mat3 with_column(const Mat3& m, int col, const Mat3& src) {
  Mat3 out = m;
  out.col(col) = src.col(col);
  return out;
}

double newton_polish(const DetCubic& dc, double x) {
  const double f = dc(x);
  const double df = (3.0 * dc.c3 * x + 2.0 * dc.c2) * x + dc.c1;
  if (df == 0.0) return x;
  const double next = x - f / df;
  return std::abs(dc(next)) <= std::abs(f) ? next : x;
}

// Candidate roots of a quadratic or linear polynomial, for c3 == 0.
std::vector<double> low_degree_roots(double a, double b, double c) {
  std::vector<double> out;
  if (a == 0.0) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q != 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(0.0);
    out.push_back(0.0);
  }
  return out;
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

template <class Unstable>
double bisect_threshold(const ModelParams& p, CrossCoeff which, double lo,
                        double hi, double tol, Unstable&& unstable) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw ValidationError("threshold search needs lo < hi and tol > 0");
  }
  const bool at_lo = unstable(with_cross(p, which, lo));
  const bool at_hi = unstable(with_cross(p, which, hi));
  if (at_lo || !at_hi) {
    throw BracketError(std::string("no stable-to-unstable transition in [") +
                       format_double(lo) + ", " + format_double(hi) +
                       "] for " + to_string(which) + " (lo " +
                       (at_lo ? "unstable" : "stable") + ", hi " +
                       (at_hi ? "unstable" : "stable") + ")");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (unstable(with_cross(p, which, mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double max_growth(const ModelParams& p, std::span<const double> mu_set) {
  double best = -std::numeric_limits<double>::infinity();
  for (double mu : mu_set) best = std::max(best, max_real_eigenvalue(p, mu));
  return best;
}

}  // namespace

const char* to_string(CrossCoeff which) {
  return which == CrossCoeff::k31 ? "k31" : "k32";
}

CrossCoeff cross_coeff_from_string(const char* name) {
  if (std::strcmp(name, "k31") == 0) return CrossCoeff::k31;
  if (std::strcmp(name, "k32") == 0) return CrossCoeff::k32;
  throw ValidationError(std::string("cross-diffusion parameter must be k31 or "
                                    "k32, got '") +
                        name + "'");
}

ModelParams with_cross(const ModelParams& p, CrossCoeff which, double value) {
  ModelParams out = p;
  out.k[2][which == CrossCoeff::k31 ? 0 : 1] = value;
  return out;
}

Mat3 stability_matrix(const ModelParams& p, double mu) {
  const SpeciesState ubar = positive_equilibrium(p);
  return -mu * diffusion_jacobian(p, ubar) + reaction_jacobian(p, ubar);
}

CubicCoeffs char_coeffs(const ModelParams& p, double mu) {
  const Mat3 m = stability_matrix(p, mu);
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
                        m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return {-m.trace(), minors, -m.determinant()};
}

bool routh_hurwitz_stable(const CubicCoeffs& c) {
  return c.a2 > 0.0 && c.a0 > 0.0 && c.a2 * c.a1 - c.a0 > 0.0;
}

std::array<std::complex<double>, 3> cubic_roots(const CubicCoeffs& c) {
  const double r = one_real_root(c);
  // (lambda - r)(lambda^2 + B lambda + C)
  const double bq = c.a2 + r;
  const double cq = c.a1 + r * bq;
  const double disc = bq * bq - 4.0 * cq;
  std::array<std::complex<double>, 3> roots{};
  roots[0] = r;
  if (disc >= 0.0) {
    const double q = -0.5 * (bq + std::copysign(std::sqrt(disc), bq));
    roots[1] = q;
    roots[2] = (q != 0.0) ? cq / q : 0.0;
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    roots[1] = {-0.5 * bq, im};
    roots[2] = {-0.5 * bq, -im};
  }
  return roots;
}

double max_real_root(const CubicCoeffs& c) {
  const auto roots = cubic_roots(c);
  return std::max({roots[0].real(), roots[1].real(), roots[2].real()});
}

double max_real_eigenvalue(const ModelParams& p, double mu) {
  return max_real_root(char_coeffs(p, mu));
}

DetCubic det_cubic(const ModelParams& p) {
  const SpeciesState ubar = positive_equilibrium(p);
  const Mat3 x = -reaction_jacobian(p, ubar);
  const Mat3 y = diffusion_jacobian(p, ubar);
  DetCubic dc;
  dc.c0 = x.determinant();
  dc.c3 = y.determinant();
  for (int j = 0; j < 3; ++j) {
    dc.c1 += with_column(x, j, y).determinant();
    dc.c2 += with_column(y, j, x).determinant();
  }
  return dc;
}

std::vector<double> det_cubic_real_roots(const DetCubic& dc) {
  std::vector<double> roots;
  const double scale =
      std::max({std::abs(dc.c3), std::abs(dc.c2), std::abs(dc.c1),
                std::abs(dc.c0)});
  if (scale == 0.0) return roots;

  if (std::abs(dc.c3) <= 1e-14 * scale) {
    roots = low_degree_roots(dc.c2, dc.c1, dc.c0);
  } else {
    Mat3 companion = Mat3::Zero();
    companion(0, 0) = -dc.c2 / dc.c3;
    companion(0, 1) = -dc.c1 / dc.c3;
    companion(0, 2) = -dc.c0 / dc.c3;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Mat3> solver(companion, false);
    for (int i = 0; i < 3; ++i) {
      const std::complex<double> z = solver.eigenvalues()[i];
      if (std::abs(z.imag()) <= kRootTol * (1.0 + std::abs(z))) {
        roots.push_back(z.real());
      }
    }
  }
  for (double& r : roots) r = newton_polish(dc, r);
  std::sort(roots.begin(), roots.end());

  std::vector<double> simple;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i + 1 < roots.size() &&
        roots[i + 1] - roots[i] < kRootTol * (1.0 + std::abs(roots[i]))) {
      ++i;  // double root: no sign change
      continue;
    }
    simple.push_back(roots[i]);
  }
  return simple;
}

std::optional<UnstableInterval> unstable_mu_interval(const ModelParams& p) {
  const DetCubic dc = det_cubic(p);
  std::vector<double> positive;
  for (double r : det_cubic_real_roots(dc)) {
    if (r > 0.0) positive.push_back(r);
  }
  for (std::size_t i = 0; i < positive.size(); ++i) {
    const bool last = i + 1 == positive.size();
    const double lo = positive[i];
    const double hi =
        last ? std::numeric_limits<double>::infinity() : positive[i + 1];
    const double probe = last ? 2.0 * lo + 1.0 : 0.5 * (lo + hi);
    if (dc(probe) < 0.0) return UnstableInterval{lo, hi};
  }
  return std::nullopt;
}

double turing_threshold(const ModelParams& p, CrossCoeff which, double lo,
                        double hi, double tol) {
  return bisect_threshold(p, which, lo, hi, tol, [](const ModelParams& q) {
    return unstable_mu_interval(q).has_value();
  });
}

double turing_threshold_on(const ModelParams& p, CrossCoeff which, double lo,
                           double hi, double tol,
                           std::span<const double> mu_set) {
  if (mu_set.empty()) throw ValidationError("wavenumber set is empty");
  return bisect_threshold(p, which, lo, hi, tol, [&](const ModelParams& q) {
    return max_growth(q, mu_set) > 0.0;
  });
}

DispersionCurve dispersion_vs_parameter(const ModelParams& p, CrossCoeff which,
                                        std::span<const double> values,
                                        std::span<const double> mu_set) {
  if (mu_set.empty()) throw ValidationError("wavenumber set is empty");
  if (!strictly_increasing(values)) {
    throw ValidationError("parameter values must be strictly increasing");
  }
  DispersionCurve curve;
  curve.kind = DispersionCurve::Kind::parameter;
  curve.points.reserve(values.size());
  for (double v : values) {
    curve.points.push_back({v, max_growth(with_cross(p, which, v), mu_set)});
  }
  return curve;
}

DispersionCurve dispersion_vs_wavenumber(const ModelParams& p,
                                         std::span<const double> mu_values) {
  if (!strictly_increasing(mu_values)) {
    throw ValidationError("wavenumbers must be strictly increasing");
  }
  DispersionCurve curve;
  curve.kind = DispersionCurve::Kind::wavenumber;
  curve.points.reserve(mu_values.size());
  for (double mu : mu_values) {
    curve.points.push_back({mu, max_real_eigenvalue(p, mu)});
  }
  return curve;
}

std::vector<double> admissible_wavenumbers(double lx, double ly, int m_max,
                                           int n_max) {
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw ValidationError("domain lengths must be > 0");
  }
  if (m_max < 0 || n_max < 0) {
    throw ValidationError("mode limits must be >= 0");
  }
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> mus;
  mus.reserve(static_cast<std::size_t>(m_max + 1) * (n_max + 1));
  for (int m = 0; m <= m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      const double kx = m / lx;
      const double ky = n / ly;
      mus.push_back(pi2 * (kx * kx + ky * ky));
    }
  }
  std::sort(mus.begin(), mus.end());
  std::vector<double> out;
  for (double mu : mus) {
    if (out.empty() || mu - out.back() > 1e-12 * std::max(1.0, mu)) {
      out.push_back(mu);
    }
  }
  return out;
}

void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve) {
  out << "x,re_lambda_max\n";
  for (const auto& pt : curve.points) {
    out << format_double(pt.x) << ',' << format_double(pt.re_lambda_max)
        << '\n';
  }
}

void write_stability_table(std::ostream& out, const ModelParams& p,
                           std::span<const double> mu_values) {
  const DetCubic dc = det_cubic(p);
  out << "det cubic a0(mu) = c3 mu^3 + c2 mu^2 + c1 mu + c0\n"
      << "  c3 = " << format_double(dc.c3) << "\n"
      << "  c2 = " << format_double(dc.c2) << "\n"
      << "  c1 = " << format_double(dc.c1) << "\n"
      << "  c0 = " << format_double(dc.c0) << "\n";
  if (const auto iv = unstable_mu_interval(p)) {
    out << "unstable interval (" << format_double(iv->mu_lo) << ", "
        << format_double(iv->mu_hi) << ")\n";
  } else {
    out << "unstable interval: none\n";
  }
  out << "mu a2 a1 a0 routh_hurwitz max_re_lambda\n";
  for (double mu : mu_values) {
    const CubicCoeffs c = char_coeffs(p, mu);
    out << format_significant(mu, 10) << ' ' << format_significant(c.a2, 10)
        << ' ' << format_significant(c.a1, 10) << ' '
        << format_significant(c.a0, 10) << ' '
        << (routh_hurwitz_stable(c) ? "stable" : "unstable") << ' '
        << format_significant(max_real_root(c), 10) << '\n';
  }
}

}  // namespace cdturing
