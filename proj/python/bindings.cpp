// Python bindings. Radial functions cross the boundary as 1-D complex NumPy arrays sampled
// on r = 0, dr, 2 dr, ...; spectra as (lambda, values, weight) triples.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "radialwave/analysis.hpp"
#include "radialwave/density.hpp"
#include "radialwave/eigen.hpp"
#include "radialwave/errors.hpp"
#include "radialwave/meanvalue.hpp"
#include "radialwave/parallel.hpp"
#include "radialwave/scenario.hpp"
#include "radialwave/transforms.hpp"
#include "radialwave/wave.hpp"

namespace py = pybind11;
using namespace radialwave;

namespace {

using CArray = py::array_t<cd, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<cd> to_vector(const CArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.shape(0)};
}

std::vector<double> to_dvector(const DArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.shape(0)};
}

CArray to_array(const std::vector<cd>& v) { return CArray(static_cast<py::ssize_t>(v.size()), v.data()); }
DArray to_array(const std::vector<double>& v) { return DArray(static_cast<py::ssize_t>(v.size()), v.data()); }

RadialFunction radial(const CArray& values, double dr, std::optional<double> support) {
  auto v = to_vector(values);
  RadialFunction f{UniformGrid{0.0, dr, v.size()}, std::move(v)};
  f.support_radius = support ? *support : support_radius(f, 0.0);
  return f;
}

CauchyData cauchy(const CArray& f, std::optional<CArray> g, double dr, std::optional<double> support) {
  auto F = radial(f, dr, support);
  auto G = g ? radial(*g, dr, support) : RadialFunction::zeros(F.grid, F.support_radius);
  const double R = support ? *support : std::max(F.support_radius, G.support_radius);
  return CauchyData::make(std::move(F), std::move(G), R);
}

py::dict state_dict(const WaveState& s) {
  py::dict d;
  d["t"] = s.t;
  d["r"] = to_array(s.u.grid.points());
  d["u"] = to_array(s.u.values);
  d["ut"] = to_array(s.ut.values);
  return d;
}

SpectralFunction spectral(const DArray& lambdas, const CArray& values, const DArray& weight) {
  auto l = to_dvector(lambdas);
  if (l.size() < 2 || l[0] != 0.0) throw py::value_error("lambda grid must be uniform and start at 0");
  return {UniformGrid{0.0, l[1] - l[0], l.size()}, to_vector(values), to_dvector(weight)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial wave equation on harmonic manifolds (C++ core)";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
  py::register_exception<CFLError>(m, "CFLError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<DensityModel>(m, "DensityModel")
      .def_static("jacobi", &DensityModel::jacobi, py::arg("alpha"), py::arg("beta"), py::arg("scale") = 1.0)
      .def_static(
          "table",
          [](const DArray& r, const DArray& A, double sphere_const) {
            return DensityModel::table(to_dvector(r), to_dvector(A), sphere_const);
          },
          py::arg("r"), py::arg("A"), py::arg("sphere_const") = 1.0)
      .def_static("load", &load_model_file, py::arg("path"))
      .def_property_readonly("alpha", &DensityModel::alpha)
      .def_property_readonly("beta", &DensityModel::beta)
      .def_property_readonly("scale", &DensityModel::scale)
      .def_property_readonly("rho", &DensityModel::rho)
      .def_property_readonly("dim", &DensityModel::dim)
      .def_property_readonly("sphere_const", &DensityModel::sphere_const)
      .def_property_readonly("polynomial_plancherel", &DensityModel::polynomial_plancherel)
      .def("density", [](const DensityModel& model, double r) { return model.eval(r).A; }, py::arg("r"))
      .def("logderiv", &DensityModel::logderiv, py::arg("r"))
      .def("__repr__", [](const DensityModel& model) {
        return "DensityModel(alpha=" + format_double(model.alpha()) + ", beta=" + format_double(model.beta()) +
               ", rho=" + format_double(model.rho()) + ")";
      });

  m.def("set_threads", &set_thread_count, py::arg("n"));
  m.def("transform_constant", &transform_constant, py::arg("model"));

  m.def(
      "phi",
      [](const DensityModel& model, cd lambda, double r_max, double dr) {
        auto e = eval_phi(model, lambda, UniformGrid::spanning(0.0, r_max, dr));
        return py::make_tuple(to_array(e.r), to_array(e.values));
      },
      py::arg("model"), py::arg("lam"), py::arg("r_max"), py::arg("dr") = 0.01,
      "Spherical function phi_lambda on [0, r_max]; returns (r, values).");
  m.def(
      "c_function",
      [](const DensityModel& model, cd lambda) { return compute_c(model, lambda, default_match_radius(model)).c; },
      py::arg("model"), py::arg("lam"));
  m.def(
      "plancherel_density",
      [](const DensityModel& model, const DArray& lambdas) {
        return to_array(plancherel_density(model, to_dvector(lambdas)));
      },
      py::arg("model"), py::arg("lambdas"));
  m.def(
      "dirichlet_spectrum",
      [](const DensityModel& model, double radius, int count) {
        return to_array(dirichlet_spectrum(model, radius, count).lambdas);
      },
      py::arg("model"), py::arg("radius"), py::arg("count"), "First Dirichlet frequencies lambda_k on the ball.");

  m.def(
      "bump",
      [](double radius, double dr, double amplitude, double sharpness, std::optional<double> r_max) {
        const auto grid = UniformGrid::spanning(0.0, r_max ? *r_max : radius + 16.0 * dr, dr);
        return to_array(make_bump(grid, radius, amplitude, sharpness).values);
      },
      py::arg("radius"), py::arg("dr") = 1e-4, py::arg("amplitude") = 1.0, py::arg("sharpness") = 1.0,
      py::arg("r_max") = py::none());

  m.def(
      "forward_transform",
      [](const DensityModel& model, const CArray& f, double dr, std::optional<double> support, double extent) {
        SpectralGridOptions opt;
        opt.extent = extent;
        const auto F = forward_radial_fourier_auto(model, radial(f, dr, support), opt);
        return py::make_tuple(to_array(F.grid.points()), to_array(F.values), to_array(F.weight));
      },
      py::arg("model"), py::arg("f"), py::arg("dr"), py::arg("support_radius") = py::none(), py::arg("extent") = 0.0,
      "Radial Fourier transform; returns (lambda, values, plancherel weight).");
  m.def(
      "inverse_transform",
      [](const DensityModel& model, const DArray& lambdas, const CArray& values, const DArray& weight, double r_max,
         double dr) {
        const auto u = inverse_radial_fourier(model, spectral(lambdas, values, weight),
                                              UniformGrid::spanning(0.0, r_max, dr));
        return py::make_tuple(to_array(u.grid.points()), to_array(u.values));
      },
      py::arg("model"), py::arg("lambdas"), py::arg("values"), py::arg("weight"), py::arg("r_max"),
      py::arg("dr") = 0.01);
  m.def(
      "abel",
      [](const DensityModel& model, const CArray& f, double dr, std::optional<double> support) {
        const auto a = abel(model, radial(f, dr, support));
        return py::make_tuple(to_array(a.grid.points()), to_array(a.values));
      },
      py::arg("model"), py::arg("f"), py::arg("dr"), py::arg("support_radius") = py::none());
  m.def(
      "spherical_mean",
      [](const DensityModel& model, const CArray& f, double dr, double d, double r_max, double out_dr,
         std::optional<double> support) {
        const auto mean = spherical_mean(model, radial(f, dr, support), d, UniformGrid::spanning(0.0, r_max, out_dr));
        return py::make_tuple(to_array(mean.grid.points()), to_array(mean.values));
      },
      py::arg("model"), py::arg("f"), py::arg("dr"), py::arg("d"), py::arg("r_max"), py::arg("out_dr") = 0.01,
      py::arg("support_radius") = py::none());

  m.def(
      "propagate_spectral",
      [](const DensityModel& model, const CArray& f, std::optional<CArray> g, double dr, double t,
         std::optional<double> r_max, double out_dr, std::optional<double> support) {
        const auto data = cauchy(f, g, dr, support);
        const double top = r_max ? *r_max : data.support_radius + std::abs(t) + model.length_unit();
        return state_dict(propagate_spectral(model, data, t, UniformGrid::spanning(0.0, top, out_dr)));
      },
      py::arg("model"), py::arg("f"), py::arg("g") = py::none(), py::arg("dr") = 1e-4, py::arg("t") = 0.0,
      py::arg("r_max") = py::none(), py::arg("out_dr") = 0.005, py::arg("support_radius") = py::none());
  m.def(
      "propagate_series",
      [](const DensityModel& model, const CArray& f, std::optional<CArray> g, double dr, double domain_radius,
         int modes, double t, double out_dr, std::optional<double> support) {
        const auto data = cauchy(f, g, dr, support);
        return state_dict(propagate_series(model, data, domain_radius, modes, t,
                                           UniformGrid::spanning(0.0, domain_radius, out_dr)));
      },
      py::arg("model"), py::arg("f"), py::arg("g") = py::none(), py::arg("dr") = 1e-4, py::arg("domain_radius") = 7.0,
      py::arg("modes") = 1700, py::arg("t") = 0.0, py::arg("out_dr") = 0.005, py::arg("support_radius") = py::none());
  m.def(
      "propagate_dalembert",
      [](const DensityModel& model, const CArray& f, std::optional<CArray> g, double dr, double d, double t,
         std::optional<double> support) { return propagate_dalembert(model, cauchy(f, g, dr, support), d, t); },
      py::arg("model"), py::arg("f"), py::arg("g") = py::none(), py::arg("dr") = 1e-4, py::arg("d") = 1.0,
      py::arg("t") = 0.0, py::arg("support_radius") = py::none());
  m.def(
      "propagate_fdtd",
      [](const DensityModel& model, const CArray& f, std::optional<CArray> g, double dr, double t, double fdtd_dr,
         std::optional<double> fdtd_dt, std::optional<double> support) {
        return state_dict(
            propagate_fdtd(model, cauchy(f, g, dr, support), t, fdtd_dr, fdtd_dt ? *fdtd_dt : 0.9 * fdtd_dr));
      },
      py::arg("model"), py::arg("f"), py::arg("g") = py::none(), py::arg("dr") = 1e-4, py::arg("t") = 0.0,
      py::arg("fdtd_dr") = 1e-3, py::arg("fdtd_dt") = py::none(), py::arg("support_radius") = py::none());

  m.def(
      "energy",
      [](const DensityModel& model, const CArray& f, std::optional<CArray> g, double dr, const std::vector<double>& times,
         std::optional<double> support) {
        const auto data = cauchy(f, g, dr, support);
        double t_max = 0.0;
        for (double t : times) t_max = std::max(t_max, std::abs(t));
        const double top = data.support_radius + t_max + model.length_unit();
        const auto spectrum = cauchy_spectrum(model, data, top + t_max);
        const auto states = spectral_trajectory(model, spectrum, times, UniformGrid::spanning(0.0, top, 0.005));
        py::list rows;
        for (const auto& s : states) {
          const auto e = energy(model, s, &spectrum);
          rows.append(py::dict(py::arg("t") = s.t, py::arg("K") = e.kinetic, py::arg("P") = e.potential,
                               py::arg("E") = e.total));
        }
        return rows;
      },
      py::arg("model"), py::arg("f"), py::arg("g") = py::none(), py::arg("dr") = 1e-4, py::arg("times") = std::vector<double>{0.0},
      py::arg("support_radius") = py::none(), "Kinetic, potential and total energy along the spectral solution.");

  m.def(
      "pw_radius",
      [](const DensityModel& model, const DArray& lambdas, const CArray& values, const DArray& weight, int j_max) {
        const auto p = pw_radius(model, spectral(lambdas, values, weight), j_max);
        return py::make_tuple(p.value, p.last_moment);
      },
      py::arg("model"), py::arg("lambdas"), py::arg("values"), py::arg("weight"), py::arg("j_max") = 40,
      "Spectral radius estimate; returns (extrapolated value, m_j_max).");

  m.def(
      "run_scenario",
      [](const std::string& config, const std::string& mode, const std::string& out) {
        RunOptions opt;
        if (mode == "run") opt.mode = RunMode::run;
        else if (mode == "spectrum") opt.mode = RunMode::spectrum;
        else if (mode == "check") opt.mode = RunMode::check;
        else throw py::value_error("mode must be run, spectrum or check");
        opt.out_dir = out;
        const auto r = run_scenario(config, opt);
        return py::dict(py::arg("pass") = r.pass, py::arg("out_dir") = r.out_dir.string(),
                        py::arg("files") = r.files, py::arg("failures") = r.failures);
      },
      py::arg("config"), py::arg("mode") = "run", py::arg("out") = "");
}
