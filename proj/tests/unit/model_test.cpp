#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cdturing/errors.hpp"
#include "cdturing/model.hpp"

using namespace cdturing;

namespace {

ModelParams kinetics(double a, double b, double c, double d, double e) {
  ModelParams p = paper_params();
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  p.e = e;
  return p;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("existence condition") {
  CHECK(check_existence(kinetics(1, 1, 0.1, 0.1, 0.1)));
  CHECK_FALSE(check_existence(kinetics(1, 2, 0.01, 0.1, 1)));
  CHECK(check_existence(kinetics(2, 1, 1, 0.1, 0.1)));
  CHECK_THROWS_AS(positive_equilibrium(kinetics(1, 2, 0.01, 0.1, 1)),
                  ConditionViolated);
}

TEST_CASE("equilibrium closed form") {
  const SpeciesState u = positive_equilibrium(paper_params());
  CHECK(u.u1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(u.u2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(u.u3 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const SpeciesState sym = positive_equilibrium(kinetics(0.7, 0.7, 0.3, 0.4, 0.4));
  CHECK(sym.u1 == sym.u2);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> draw(0.05, 2.0);
  int tried = 0;
  while (tried < 200) {
    const ModelParams p = kinetics(draw(rng), draw(rng), draw(rng), draw(rng), draw(rng));
    if (!check_existence(p)) continue;
    ++tried;
    const Vec3 f = reaction(p, positive_equilibrium(p));
    CHECK(f.lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("reaction values") {
  const ModelParams p = paper_params();
  CHECK(reaction(p, {0, 0, 0}).isZero(0.0));
  const Vec3 f = reaction(p, {1, 1, 1});
  CHECK(f[0] == doctest::Approx(-1.0));
  CHECK(f[1] == doctest::Approx(-1.0));
  CHECK(f[2] == doctest::Approx(0.1));
}

TEST_CASE("reaction jacobian at the equilibrium") {
  const ModelParams p = paper_params();
  const Mat3 j = reaction_jacobian(p, positive_equilibrium(p));
  Mat3 expect;
  expect << -1.0 / 3, 0, -1.0 / 3, 0, -1.0 / 3, -1.0 / 3, 1.0 / 15, 1.0 / 15,
      -1.0 / 15;
  CHECK((j - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("jacobians agree with central differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> draw(0.01, 2.0);
  ModelParams p = paper_params(1.3);
  p.k[0][2] = 0.7;
  p.k[2][0] = 0.4;
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 u(draw(rng), draw(rng), draw(rng));
    const Mat3 jg = reaction_jacobian(p, SpeciesState::from(u));
    const Mat3 jk = diffusion_jacobian(p, SpeciesState::from(u));
    for (int col = 0; col < 3; ++col) {
      Vec3 up = u, dn = u;
      up[col] += h;
      dn[col] -= h;
      const Vec3 fg = (reaction(p, SpeciesState::from(up)) -
                       reaction(p, SpeciesState::from(dn))) / (2 * h);
      const Vec3 fk = (diffusion_flux(p, SpeciesState::from(up)) -
                       diffusion_flux(p, SpeciesState::from(dn))) / (2 * h);
      CHECK((fg - jg.col(col)).cwiseAbs().maxCoeff() <= 1e-7);
      CHECK((fk - jk.col(col)).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("diffusion flux") {
  ModelParams p = paper_params();
  CHECK(diffusion_flux(p, {0, 0, 0}).isZero(0.0));
  p.k[2][1] = 0.1;
  const Vec3 k = diffusion_flux(p, {1, 1, 1});
  CHECK(k[0] == doctest::Approx(0.2));
  CHECK(k[1] == doctest::Approx(0.2));
  CHECK(k[2] == doctest::Approx(0.3));

  ModelParams self;
  self.k[0][0] = 0.3;
  self.k[1][1] = 0.5;
  self.k[2][2] = 0.7;
  const Vec3 ks = diffusion_flux(self, {2, 3, 4});
  CHECK(ks[0] == doctest::Approx(0.6));
  CHECK(ks[1] == doctest::Approx(1.5));
  CHECK(ks[2] == doctest::Approx(2.8));
  const Mat3 jk = diffusion_jacobian(self, {2, 3, 4});
  CHECK(jk.isDiagonal());
  CHECK(jk(2, 2) == 0.7);
}

TEST_CASE("lyapunov function") {
  const ModelParams p = paper_params();
  const SpeciesState ubar = positive_equilibrium(p);
  CHECK(lyapunov_value(p, ubar, ubar) == 0.0);
  CHECK(lyapunov_derivative(p, ubar, ubar) == 0.0);
  CHECK(lyapunov_value(p, ubar, {0.3, 0.4, 0.7}) > 0.0);
  CHECK(lyapunov_derivative(p, ubar, {0.3, 0.4, 0.7}) < 0.0);

  const ModelParams unit = kinetics(1, 1, 1, 1, 1);
  CHECK(lyapunov_value(unit, {1, 1, 1}, {std::numbers::e, 1, 1}) ==
        doctest::Approx(std::numbers::e - 2.0));

  CHECK_THROWS_AS(lyapunov_value(p, ubar, {0.0, 0.3, 0.3}), DomainError);
  CHECK_THROWS_AS(lyapunov_derivative(p, ubar, {0.3, -1.0, 0.3}), DomainError);
}

TEST_CASE("lyapunov derivative is the chain rule along the flow") {
  // dV/dt = grad V . F(u), grad V = (d(1 - ubar1/u1), e(1 - ubar2/u2), 1 - ubar3/u3)
  const ModelParams p = kinetics(1.2, 0.8, 0.5, 0.6, 0.9);
  const SpeciesState ubar = positive_equilibrium(p);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> draw(0.05, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SpeciesState u{draw(rng), draw(rng), draw(rng)};
    const Vec3 f = reaction(p, u);
    const double via_grad = p.d * (1 - ubar.u1 / u.u1) * f[0] +
                            p.e * (1 - ubar.u2 / u.u2) * f[1] +
                            (1 - ubar.u3 / u.u3) * f[2];
    CHECK(lyapunov_derivative(p, ubar, u) == doctest::Approx(via_grad).epsilon(1e-10));
  }
}

TEST_CASE("parameter validation") {
  ModelParams p = paper_params();
  CHECK_NOTHROW(validate(p));
  p.k[0][1] = 0.2;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = paper_params();
  p.k[1][1] = 0.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = paper_params();
  p.c = -1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
}

}
