#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpe/config.hpp"
#include "gpe/ensemble.hpp"
#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/spectral.hpp"

namespace py = pybind11;
using namespace gpe;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

SpectralField from_array(const CArray& a, int N) {
  SpectralField f(N);
  if (a.ndim() != 2 || a.shape(1) != 2 || static_cast<std::size_t>(a.shape(0)) != f.size())
    throw InvalidArgument("expected an array of shape (modes, 2) for order " + std::to_string(N));
  auto r = a.unchecked<2>();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {r(i, 0), r(i, 1)};
  return f;
}

CArray to_array(const SpectralField& f) {
  CArray a({static_cast<py::ssize_t>(f.size()), py::ssize_t{2}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < f.size(); ++i) {
    w(i, 0) = f[i][0];
    w(i, 1) = f[i][1];
  }
  return a;
}

py::dict records_dict(const Trajectory& tr) {
  std::vector<double> t, gev, l2, sem, theta;
  for (const auto& r : tr.records) {
    t.push_back(r.t);
    gev.push_back(r.gevrey);
    l2.push_back(r.l2);
    sem.push_back(r.seminorm);
    theta.push_back(r.theta);
  }
  py::dict d;
  d["t"] = py::array(py::cast(t));
  d["gevrey"] = py::array(py::cast(gev));
  d["l2"] = py::array(py::cast(l2));
  d["seminorm"] = py::array(py::cast(sem));
  d["theta"] = py::array(py::cast(theta));
  d["stop_reason"] = to_string(tr.stop_reason);
  d["eta"] = tr.eta ? py::cast(*tr.eta) : py::none();
  d["seed"] = tr.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral Galerkin core for the stochastic primitive equations";
  m.attr("__version__") = GPE_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("build_mode_set", [](int N) {
    std::vector<std::tuple<int, int, int>> out;
    for (const auto& k : build_mode_set(N)) out.emplace_back(k.m1, k.m2, k.m3);
    return out;
  }, py::arg("N"));

  m.def("random_field", [](int N, double mu, double q, std::uint64_t seed, double mu_z) {
    Rng rng(seed);
    RandomFieldSpec s;
    s.mu = mu;
    s.mu_z = mu_z;
    s.q = q;
    return to_array(random_field(N, s, rng));
  }, py::arg("N"), py::arg("mu") = 0.5, py::arg("q") = 4.0, py::arg("seed") = 0, py::arg("mu_z") = -1.0);

  m.def("project_d0", [](const CArray& a, int N) { return to_array(project_D0(from_array(a, N))); },
        py::arg("coeffs"), py::arg("N"));

  m.def("norm", [](const CArray& a, int N, double tau, double r, double gamma, const std::string& family,
                   const std::string& kind) {
    const NormFamily fam = family == "anisotropic" ? NormFamily::anisotropic : NormFamily::isotropic;
    NormKind k = NormKind::full;
    if (kind == "seminorm") k = NormKind::seminorm;
    else if (kind == "L2") k = NormKind::L2;
    else if (kind != "full") throw InvalidArgument("kind must be full, seminorm or L2");
    return norm(from_array(a, N), {tau, r, gamma, r}, fam, k);
  }, py::arg("coeffs"), py::arg("N"), py::arg("tau") = 0.0, py::arg("r") = 0.0, py::arg("gamma") = 0.0,
     py::arg("family") = "isotropic", py::arg("kind") = "full");

  m.def("nonlinear_q", [](const CArray& f, const CArray& g, int N, const std::string& method) {
    const QMethod q = method == "direct" ? QMethod::direct : QMethod::pseudospectral;
    return to_array(nonlinear_Q(from_array(f, N), from_array(g, N), q));
  }, py::arg("f"), py::arg("g"), py::arg("N"), py::arg("method") = "pseudospectral");

  m.def("cutoff_theta", [](double x, double rho) { return cutoff_theta(x, {rho}); }, py::arg("x"), py::arg("rho"));

  m.def("radius_schedule", [](const std::string& mode, double tau0, double rho, double C_cal, double nu_z) {
    const Regime r = mode == "viscous" ? Regime::viscous : Regime::inviscid;
    const auto s = radius_schedule(r, tau0, rho, C_cal, 4.0, 3.0, nu_z);
    py::dict d;
    d["T"] = s.T_max;
    d["tau_T"] = s.tau(s.T_max);
    d["gamma_rate"] = s.gamma_rate;
    return d;
  }, py::arg("mode"), py::arg("tau0"), py::arg("rho"), py::arg("C_cal"), py::arg("nu_z") = 0.0);

  m.def("parse_config", [](const std::string& text) {
    const SimConfig c = parse_config_text(text, false);
    py::dict d;
    for (const auto& [k, v] : c.resolved) d[py::str(k)] = v;
    return d;
  }, py::arg("text"));

  m.def("simulate", [](const std::string& text, int index) {
    const SimConfig c = parse_config_text(text, false);
    Trajectory tr;
    {
      py::gil_scoped_release nogil;
      tr = simulate(c, index);
    }
    return records_dict(tr);
  }, py::arg("config_text"), py::arg("index") = 0);

  m.def("run_ensemble", [](const std::string& text) {
    const SimConfig c = parse_config_text(text, false);
    EnsembleSummary s;
    {
      py::gil_scoped_release nogil;
      s = run_ensemble(c);
    }
    py::dict d;
    d["ensemble_size"] = s.ensemble_size;
    d["failed"] = s.failed;
    d["fraction_eta"] = s.fraction_eta;
    d["fraction_T"] = s.fraction_T;
    d["output_dir"] = c.output_dir;
    return d;
  }, py::arg("config_text"));
}
