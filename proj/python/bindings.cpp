#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdturing/analysis.hpp"
#include "cdturing/config.hpp"
#include "cdturing/errors.hpp"
#include "cdturing/model.hpp"
#include "cdturing/ode.hpp"
#include "cdturing/pde.hpp"
#include "cdturing/stability.hpp"

namespace py = pybind11;
using namespace cdturing;

namespace {

py::array_t<double> field_array(const Field& f) {
  py::array_t<double> out({f.grid().ny, f.grid().nx});
  auto view = out.mutable_unchecked<2>();
  for (int j = 0; j < f.grid().ny; ++j) {
    for (int i = 0; i < f.grid().nx; ++i) view(j, i) = f(i, j);
  }
  return out;
}

std::array<double, 3> as_array(const Vec3& v) { return {v[0], v[1], v[2]}; }

SpeciesState as_state(const std::array<double, 3>& u) { return {u[0], u[1], u[2]}; }

}  // namespace

PYBIND11_MODULE(_cdturing, m) {
  m.doc() = "Cross-diffusion Turing analysis for a two-prey one-predator model";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConditionViolated>(m, "ConditionViolated", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<StepSizeError>(m, "StepSizeError", base.ptr());
  py::register_exception<BracketError>(m, "BracketError", base.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("b", &ModelParams::b)
      .def_readwrite("c", &ModelParams::c)
      .def_readwrite("d", &ModelParams::d)
      .def_readwrite("e", &ModelParams::e)
      .def_readwrite("k", &ModelParams::k, "3x3 diffusion table, k[0][2] is k13")
      .def("validate", [](const ModelParams& p) { validate(p); })
      .def(py::self == py::self)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) +
               ", c=" + std::to_string(p.c) + ", d=" + std::to_string(p.d) +
               ", e=" + std::to_string(p.e) + ", k32=" + std::to_string(p.k32()) + ")";
      });

  m.def("paper_params", &paper_params, py::arg("k32") = 2.0);
  m.def("check_existence", &check_existence);
  m.def("positive_equilibrium", [](const ModelParams& p) {
    return as_array(positive_equilibrium(p).vec());
  });
  m.def("reaction", [](const ModelParams& p, const std::array<double, 3>& u) {
    return as_array(reaction(p, as_state(u)));
  });

  m.def("char_coeffs", [](const ModelParams& p, double mu) {
    const CubicCoeffs c = char_coeffs(p, mu);
    return std::array<double, 3>{c.a2, c.a1, c.a0};
  }, "(a2, a1, a0) of the characteristic cubic at wavenumber mu");
  m.def("routh_hurwitz_stable", [](double a2, double a1, double a0) {
    return routh_hurwitz_stable({a2, a1, a0});
  });
  m.def("max_real_eigenvalue", &max_real_eigenvalue);
  m.def("det_cubic", [](const ModelParams& p) {
    const DetCubic d = det_cubic(p);
    return std::array<double, 4>{d.c3, d.c2, d.c1, d.c0};
  });
  m.def("unstable_mu_interval",
        [](const ModelParams& p) -> std::optional<std::pair<double, double>> {
          if (const auto iv = unstable_mu_interval(p)) {
            return std::pair{iv->mu_lo, iv->mu_hi};
          }
          return std::nullopt;
        });
  m.def("admissible_wavenumbers", &admissible_wavenumbers, py::arg("lx"),
        py::arg("ly"), py::arg("m_max") = 50, py::arg("n_max") = 50);
  m.def("turing_threshold",
        [](const ModelParams& p, const std::string& which, double lo, double hi,
           double tol, std::optional<std::vector<double>> mu_set) {
          const CrossCoeff c = cross_coeff_from_string(which.c_str());
          return mu_set ? turing_threshold_on(p, c, lo, hi, tol, *mu_set)
                        : turing_threshold(p, c, lo, hi, tol);
        },
        py::arg("p"), py::arg("which") = "k32", py::arg("lo") = 0.1,
        py::arg("hi") = 3.0, py::arg("tol") = 1e-4, py::arg("mu_set") = py::none());

  m.def("integrate_ode",
        [](const ModelParams& p, const std::array<double, 3>& u0, double t_end,
           double dt) {
          const Trajectory traj = integrate_ode(p, as_state(u0), t_end, dt);
          const auto n = static_cast<py::ssize_t>(traj.states.size());
          py::array_t<double> times(n);
          py::array_t<double> states({n, py::ssize_t{3}});
          auto t = times.mutable_unchecked<1>();
          auto s = states.mutable_unchecked<2>();
          for (py::ssize_t k = 0; k < n; ++k) {
            t(k) = traj.times[k];
            s(k, 0) = traj.states[k].u1;
            s(k, 1) = traj.states[k].u2;
            s(k, 2) = traj.states[k].u3;
          }
          return py::make_tuple(times, states);
        },
        py::arg("p"), py::arg("u0"), py::arg("t_end"), py::arg("dt") = 0.01,
        "(times, states) with states of shape (n, 3)");

  m.def("simulate",
        [](const ModelParams& p, int nx, int ny, double dx, double dt, long steps,
           std::uint64_t seed, double amplitude, const std::string& scheme) {
          SimConfig cfg;
          cfg.dt = dt;
          cfg.steps = steps;
          cfg.snapshot_every = steps;
          cfg.seed = seed;
          cfg.perturb_amplitude = amplitude;
          cfg.scheme = scheme == "semi-implicit" ? Scheme::semi_implicit
                                                 : Scheme::explicit_euler;
          SimResult res;
          {
            py::gil_scoped_release release;
            res = simulate(p, Grid{nx, ny, dx, dx}, cfg);
          }
          return py::make_tuple(field_array(res.final[0]), field_array(res.final[1]),
                                field_array(res.final[2]));
        },
        py::arg("p"), py::arg("nx") = 100, py::arg("ny") = 100, py::arg("dx") = 1.0,
        py::arg("dt") = 0.005, py::arg("steps") = 40000, py::arg("seed") = 20240101,
        py::arg("amplitude") = 0.05, py::arg("scheme") = "explicit",
        "Final (u1, u2, u3) fields, each of shape (ny, nx)");

  m.def("pattern_metrics",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
           double rel_threshold) {
          if (a.ndim() != 2) throw ValidationError("expected a 2D array");
          const Grid g{static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 1.0, 1.0};
          Field f(g);
          auto view = a.unchecked<2>();
          for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) f(i, j) = view(j, i);
          }
          const PatternMetrics pm = pattern_metrics(f, rel_threshold);
          py::dict out;
          out["amplitude"] = pm.amplitude;
          out["mean"] = pm.mean;
          out["spot_count"] = pm.spot_count;
          out["classification"] = to_string(pm.classification);
          return out;
        },
        py::arg("field"), py::arg("rel_threshold") = 0.01);

  m.def("normalize_config", [](const std::string& text) {
    return format_config(parse_config(text));
  }, "Parse a configuration document and return its full manifest text");
  m.attr("__version__") = kCodeVersion;
}
