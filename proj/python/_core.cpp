#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsclab/acceptance.hpp"
#include "nsclab/config.hpp"
#include "nsclab/errors.hpp"
#include "nsclab/fit.hpp"
#include "nsclab/green.hpp"
#include "nsclab/linsim.hpp"
#include "nsclab/nonlinsim.hpp"
#include "nsclab/symbol.hpp"

namespace py = pybind11;
using namespace nsclab;

namespace {

ExperimentConfig make_config(const std::string& text, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg = parse_config(text);
  for (const auto& o : overrides) apply_override(cfg, o);
  return cfg;
}

Vec3 to_vec3(const std::vector<double>& xi) {
  if (xi.size() == 1) return Vec3(xi[0], 0, 0);
  if (xi.size() == 3) return Vec3(xi[0], xi[1], xi[2]);
  throw std::invalid_argument("xi must have one or three entries");
}

py::array_t<double> as_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Navier-Stokes-Cattaneo numerical laboratory";

  auto base = py::register_exception<Error>(m, "NsclabError", PyExc_RuntimeError);
  py::register_exception<ConfigKeyError>(m, "ConfigKeyError", base.ptr());
  py::register_exception<InvalidParams>(m, "InvalidParams", base.ptr());

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("R", &PhysicalParams::R)
      .def_readwrite("gamma", &PhysicalParams::gamma)
      .def_readwrite("kappa", &PhysicalParams::kappa)
      .def_readwrite("tau", &PhysicalParams::tau)
      .def_readwrite("nu_tilde", &PhysicalParams::nu_tilde)
      .def_readwrite("eta_tilde", &PhysicalParams::eta_tilde)
      .def_readwrite("rho_star", &PhysicalParams::rho_star)
      .def_readwrite("theta_star", &PhysicalParams::theta_star);

  m.def("normalize", [](const PhysicalParams& p) {
    const auto np = normalize(p);
    py::dict d;
    d["c"] = np.c;
    d["sigma"] = np.sigma;
    d["nu"] = np.nu;
    d["eta"] = np.eta;
    d["a"] = np.a;
    d["b"] = np.b;
    d["tau"] = np.tau;
    d["c_hat"] = np.c_hat();
    d["kappa_prime"] = np.kappa_prime();
    return d;
  });

  m.def(
      "symbol",
      [](const std::vector<double>& xi, const PhysicalParams& p) {
        return Eigen::MatrixXcd(build_symbol(to_vec3(xi), normalize(p)).entries);
      },
      py::arg("xi"), py::arg("params") = PhysicalParams{});

  m.def(
      "eigenvalues",
      [](double r, const PhysicalParams& p) {
        const auto e = eigen_set(r, normalize(p));
        std::vector<cplx> out;
        for (int k = 1; k <= 6; ++k) out.push_back(e.lambda(k));
        return py::make_tuple(out, e.ambiguous);
      },
      py::arg("r"), py::arg("params") = PhysicalParams{}, "(lambda_1..lambda_6, ambiguous) at radius r");

  m.def(
      "green",
      [](const std::vector<double>& xi, double t, const std::string& method, const PhysicalParams& p) {
        return Eigen::MatrixXcd(green(to_vec3(xi), t, normalize(p), parse_green_method(method)).entries);
      },
      py::arg("xi"), py::arg("t"), py::arg("method") = "explicit", py::arg("params") = PhysicalParams{});

  m.def(
      "fit_decay",
      [](const std::vector<double>& t, const std::vector<double>& v, std::optional<double> t_min,
         std::optional<double> t_max) {
        const DecayFit f = (t_min && t_max) ? fit_decay(t, v, *t_min, *t_max) : fit_decay(t, v);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["stderr"] = f.stderr_slope;
        d["t_min"] = f.t_min;
        d["t_max"] = f.t_max;
        d["n_points"] = f.n_points;
        return d;
      },
      py::arg("times"), py::arg("values"), py::arg("t_min") = py::none(), py::arg("t_max") = py::none());

  m.def(
      "linear_decay",
      [](const std::string& config, const std::vector<std::string>& overrides) {
        const auto cfg = make_config(config, overrides);
        const auto times = parse_times(cfg.time.times);
        const auto req = make_requests(cfg.requests);
        NormSeries s;
        {
          py::gil_scoped_release nogil;
          s = evolve_series(make_radial_data(cfg.data), times, req, normalize(cfg.physical));
        }
        py::dict cols;
        for (const auto& c : s.columns) cols[py::str(c.request.label())] = as_array(c.values);
        py::dict d;
        d["times"] = as_array(s.times);
        d["columns"] = cols;
        return d;
      },
      py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
      "Norm columns of the [data] initial data on the [time] grid for the [requests] columns");

  m.def(
      "nonlinear",
      [](const std::string& config, const std::vector<std::string>& overrides) {
        const auto cfg = make_config(config, overrides);
        RunResult res;
        {
          py::gil_scoped_release nogil;
          res = run(make_nonlinear_config(cfg), normalize(cfg.physical));
        }
        std::vector<double> t, mass, energy, entropy, h3f, h3p, rho;
        for (const auto& r : res.report.rows) {
          t.push_back(r.time);
          mass.push_back(r.mass);
          energy.push_back(r.energy);
          entropy.push_back(r.entropy);
          h3f.push_back(r.h3_fluid);
          h3p.push_back(r.h3_psi);
          rho.push_back(r.min_density);
        }
        py::dict d;
        d["time"] = as_array(t);
        d["mass"] = as_array(mass);
        d["energy"] = as_array(energy);
        d["entropy"] = as_array(entropy);
        d["h3_fluid"] = as_array(h3f);
        d["h3_psi"] = as_array(h3p);
        d["min_density"] = as_array(rho);
        d["steps"] = res.report.steps;
        d["completed"] = res.completed;
        d["error"] = res.error;
        return d;
      },
      py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{});

  m.def(
      "accept_json",
      [](const std::string& criteria, const std::string& config, const std::vector<std::string>& overrides) {
        const auto cfg = make_config(config, overrides);
        const auto ids = parse_criteria(criteria);
        AcceptanceReport rep;
        {
          py::gil_scoped_release nogil;
          rep = run_acceptance_suite(cfg, ids);
        }
        return rep.to_json().dump();
      },
      py::arg("criteria") = "all", py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{});

  m.def(
      "config_json",
      [](const std::string& config, const std::vector<std::string>& overrides) {
        return nsclab::to_json(make_config(config, overrides)).dump();
      },
      py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{});
}
