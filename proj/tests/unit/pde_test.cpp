#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cdturing/errors.hpp"
#include "cdturing/output.hpp"
#include "cdturing/pde.hpp"

using namespace cdturing;

namespace {

Fields uniform_fields(const Grid& g, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(lo, hi);
  Fields u;
  for (auto& f : u) {
    f = Field(g);
    for (double& v : f.values()) v = draw(rng);
  }
  return u;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  }
  return m;
}

}  // namespace

TEST_SUITE("pde") {

TEST_CASE("grid validation") {
  CHECK_NOTHROW(validate(Grid{}));
  CHECK_THROWS_AS(validate(Grid{2, 10, 1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(validate(Grid{10, 10, 1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate(Grid{10, 10, 0.0, 0.0}), ValidationError);
}

TEST_CASE("initial condition") {
  const ModelParams p = paper_params();
  const Grid g{20, 15, 1.0, 1.0};
  const Fields flat = initial_condition(p, g, 1, 0.0);
  CHECK(flat[0].min() == flat[0].max());
  CHECK(flat[2].max() == positive_equilibrium(p).u3);

  const Fields a = initial_condition(p, g, 99, 0.05);
  const Fields b = initial_condition(p, g, 99, 0.05);
  const Fields c = initial_condition(p, g, 100, 0.05);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a[0].max() <= 1.0 / 3.0 + 0.05);
  CHECK(a[0].min() >= 1.0 / 3.0 - 0.05);

  std::size_t clamped = 0;
  const Fields big = initial_condition(p, g, 3, 1.0, &clamped);
  CHECK(clamped > 0);
  CHECK(big[0].min() >= kPositivityFloor);
}

TEST_CASE("laplacian of simple fields") {
  const Grid g{12, 9, 0.5, 0.5};
  const Field constant(g, 3.25);
  const Field flat = nine_point_laplacian(constant);
  for (double v : flat.values()) CHECK(v == 0.0);

  Field q(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = i * g.dx, y = j * g.dy;
      q(i, j) = x * x + y * y;
    }
  }
  const Field lap = nine_point_laplacian(q);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) CHECK(std::abs(lap(i, j) - 4.0) <= 1e-10);
  }
}

TEST_CASE("laplacian converges at second order on a cosine mode") {
  std::vector<double> errs;
  for (int n : {17, 33, 65}) {
    const double h = 1.0 / (n - 1);
    Field u(Grid{n, n, h, h});
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        u(i, j) = std::cos(std::numbers::pi * i * h) * std::cos(std::numbers::pi * j * h);
      }
    }
    const Field l = nine_point_laplacian(u);
    double e = 0.0;
    for (std::size_t k = 0; k < u.values().size(); ++k) {
      e = std::max(e, std::abs(l.values()[k] +
                               2.0 * std::numbers::pi * std::numbers::pi * u.values()[k]));
    }
    errs.push_back(e);
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.98);
  CHECK(std::log2(errs[1] / errs[2]) > 1.99);
}

TEST_CASE("equilibrium is a fixed point of both schemes") {
  const ModelParams p = paper_params();
  const Grid g{16, 16, 1.0, 1.0};
  for (Scheme s : {Scheme::explicit_euler, Scheme::semi_implicit}) {
    SimConfig cfg;
    cfg.scheme = s;
    cfg.steps = 50;
    cfg.snapshot_every = 50;
    const Fields start = initial_condition(p, g, 1, 0.0);
    const SimResult r = simulate_from(p, start, cfg);
    for (int k = 0; k < 3; ++k) CHECK(max_diff(r.final[k], start[k]) <= 1e-13);
  }
}

TEST_CASE("diffusion alone conserves the discrete mass") {
  const ModelParams p = paper_params(1.5);
  const Grid g{64, 64, 1.0, 1.0};
  const Fields u = uniform_fields(g, 4, 0.2, 1.0);
  SimConfig cfg;
  cfg.reaction = false;
  cfg.steps = 1000;
  cfg.snapshot_every = 1000;
  const SimResult r = simulate_from(p, u, cfg);
  for (int s = 0; s < 3; ++s) {
    const double before = discrete_mass(u[s]);
    CHECK(std::abs(discrete_mass(r.final[s]) - before) / before < 1e-8);
  }
}

TEST_CASE("explicit scheme blows up far above the stability limit") {
  const ModelParams p = paper_params();
  const Grid g{16, 16, 1.0, 1.0};
  SimConfig cfg;
  cfg.dt = 50.0;
  cfg.steps = 200;
  cfg.snapshot_every = 200;
  CHECK_THROWS_AS(simulate(p, g, cfg), BlowUpError);
  try {
    simulate(p, g, cfg);
  } catch (const BlowUpError& err) {
    CHECK(std::string(err.what()).rfind("step ", 0) == 0);
  }
}

TEST_CASE("same seed, same run") {
  const ModelParams p = paper_params();
  const Grid g{24, 24, 1.0, 1.0};
  SimConfig cfg;
  cfg.steps = 300;
  cfg.snapshot_every = 100;
  const SimResult a = simulate(p, g, cfg);
  const SimResult b = simulate(p, g, cfg);
  CHECK(a.final == b.final);
  REQUIRE(a.snapshots.size() == 3);
  CHECK(a.snapshots[2].step == 300);
  CHECK(a.snapshots[2].fields == a.final);
}

TEST_CASE("explicit and semi-implicit schemes agree at small dt") {
  const ModelParams p = paper_params();
  const Grid g{32, 32, 1.0, 1.0};
  SimConfig ex;
  ex.dt = 0.001;
  ex.steps = 2000;
  ex.snapshot_every = 2000;
  SimConfig im = ex;
  im.scheme = Scheme::semi_implicit;
  const SimResult a = simulate(p, g, ex);
  const SimResult b = simulate(p, g, im);
  CHECK(b.diagnostics.picard_failures == 0);
  for (int s = 0; s < 3; ++s) CHECK(max_diff(a.final[s], b.final[s]) < 1e-3);
}

TEST_CASE("step matches one stepper advance") {
  const ModelParams p = paper_params();
  const Grid g{10, 10, 1.0, 1.0};
  SimConfig cfg;
  cfg.steps = 1;
  cfg.snapshot_every = 1;
  const Fields u = initial_condition(p, g, 5, 0.05);
  const Fields once = step(u, p, cfg);
  CHECK(once == simulate_from(p, u, cfg).final);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.dt = 0.0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg = SimConfig{};
  cfg.snapshot_every = cfg.steps + 1;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
}

}

TEST_SUITE("output") {

TEST_CASE("pgm round trip") {
  const Grid g{7, 5, 1.0, 1.0};
  Field f(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) f(i, j) = 0.1 + 0.03 * i - 0.02 * j * j;
  }
  for (PgmFormat fmt : {PgmFormat::ascii_p2, PgmFormat::binary_p5}) {
    std::stringstream buf;
    write_pgm(buf, f, fmt);
    const Field levels = read_pgm(buf);
    CHECK(levels.grid().nx == 7);
    CHECK(levels.grid().ny == 5);
    CHECK(levels.min() == 0.0);
    CHECK(levels.max() == 65535.0);
    const Field back = pgm_to_values(levels, f.min(), f.max());
    const double step = (f.max() - f.min()) / 65535.0;
    for (std::size_t k = 0; k < f.values().size(); ++k) {
      CHECK(std::abs(back.values()[k] - f.values()[k]) <= step);
    }
  }
}

TEST_CASE("constant field maps to zero gray") {
  const Field f(Grid{4, 4, 1.0, 1.0}, 2.0);
  std::stringstream buf;
  write_pgm(buf, f, PgmFormat::ascii_p2);
  CHECK(read_pgm(buf).max() == 0.0);
}

TEST_CASE("matrix dump round trip is exact") {
  const Grid g{6, 4, 1.0, 1.0};
  Field f(g);
  std::mt19937_64 rng(8);
  for (double& v : f.values()) v = std::generate_canonical<double, 53>(rng) / 3.0;
  std::stringstream buf;
  write_matrix(buf, f);
  CHECK(read_matrix(buf, g) == f);
}

TEST_CASE("bad raster input") {
  std::stringstream junk("P6\n2 2\n255\n");
  CHECK_THROWS_AS(read_pgm(junk), IoError);
  std::stringstream short_p2("P2\n2 2\n65535\n1 2 3\n");
  CHECK_THROWS_AS(read_pgm(short_p2), IoError);
}

}
