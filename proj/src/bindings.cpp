#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphon_sync/dynamics.hpp"
#include "graphon_sync/errors.hpp"
#include "graphon_sync/experiments.hpp"
#include "graphon_sync/graphon.hpp"
#include "graphon_sync/integrator.hpp"
#include "graphon_sync/observables.hpp"
#include "graphon_sync/theory.hpp"
#include "graphon_sync/ws_reduction.hpp"

namespace py = pybind11;
using namespace gsync;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

PhaseField to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw DimensionError("expected a one-dimensional array of phases");
  return PhaseField(std::vector<double>(a.data(), a.data() + a.size()));
}

CouplingSpec coupling_for(double beta) {
  return beta == 0.0 ? CouplingSpec::kuramoto() : CouplingSpec::sakaguchi(beta);
}

py::dict trajectory_dict(const Trajectory& traj) {
  py::array_t<double> states({traj.states.size(), traj.states.empty() ? 0 : traj.states[0].mesh()});
  auto view = states.mutable_unchecked<2>();
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    for (std::size_t i = 0; i < traj.states[k].mesh(); ++i) view(k, i) = traj.states[k][i];
  py::dict d;
  d["times"] = to_array(traj.times);
  d["states"] = states;
  d["final_rhs"] = to_array(traj.final_rhs.values());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kuramoto-type oscillators on graphon random networks";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<FrameError>(m, "FrameError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  py::class_<Graphon>(m, "Graphon")
      .def(py::init([](std::string label, std::function<double(double, double)> w) {
             return Graphon(std::move(label), std::move(w));
           }),
           py::arg("label"), py::arg("kernel"))
      .def_static("constant", &Graphon::constant, py::arg("c"))
      .def_static("product_sine", &Graphon::product_sine)
      .def_static("from_label", &Graphon::from_label, py::arg("label"))
      .def("__call__", &Graphon::operator(), py::arg("x"), py::arg("y"))
      .def_property_readonly("label", &Graphon::label);

  py::class_<DiscretizedGraphon>(m, "DiscretizedGraphon")
      .def_property_readonly("n", &DiscretizedGraphon::n)
      .def("__call__", &DiscretizedGraphon::operator(), py::arg("i"), py::arg("j"))
      .def("to_array", [](const DiscretizedGraphon& d) {
        auto a = to_array(d.cells());
        return a.reshape({d.n(), d.n()});
      });

  py::class_<SampledNetwork>(m, "SampledNetwork")
      .def_property_readonly("n", &SampledNetwork::n)
      .def_property_readonly("alpha", &SampledNetwork::alpha)
      .def_property_readonly("seed", &SampledNetwork::seed)
      .def_property_readonly("edge_count", &SampledNetwork::edge_count)
      .def("degree", &SampledNetwork::degree, py::arg("i"))
      .def("adjacent", &SampledNetwork::adjacent, py::arg("i"), py::arg("j"))
      .def("neighbors", [](const SampledNetwork& net, std::size_t i) {
        auto nb = net.neighbors(i);
        return std::vector<std::uint32_t>(nb.begin(), nb.end());
      })
      .def("__eq__", [](const SampledNetwork& a, const SampledNetwork& b) { return a == b; });

  m.def("discretize", &discretize, py::arg("graphon"), py::arg("n"));
  m.def("sample_network", &sample_network, py::arg("cells"), py::arg("alpha"), py::arg("seed"));
  m.def("erdos_renyi", &erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("is_connected", &is_connected, py::arg("network"));

  m.def(
      "simulate_sds",
      [](const SampledNetwork& net, py::array_t<double> theta0, double beta, double step,
         double horizon, std::size_t store_stride) {
        IntegratorConfig cfg{step, horizon, store_stride};
        return trajectory_dict(integrate(make_sds_rhs(net, coupling_for(beta)), to_field(theta0), cfg));
      },
      py::arg("network"), py::arg("theta0"), py::arg("beta") = 0.0, py::arg("step") = 0.01,
      py::arg("horizon") = 1.0, py::arg("store_stride") = 1);
  m.def(
      "simulate_ads",
      [](const DiscretizedGraphon& d, py::array_t<double> theta0, double beta, double step,
         double horizon, std::size_t store_stride) {
        IntegratorConfig cfg{step, horizon, store_stride};
        return trajectory_dict(integrate(make_ads_rhs(d, coupling_for(beta)), to_field(theta0), cfg));
      },
      py::arg("cells"), py::arg("theta0"), py::arg("beta") = 0.0, py::arg("step") = 0.01,
      py::arg("horizon") = 1.0, py::arg("store_stride") = 1);
  m.def(
      "simulate_cds",
      [](const Graphon& g, py::array_t<double> theta0, double beta, double step, double horizon,
         std::size_t store_stride) {
        IntegratorConfig cfg{step, horizon, store_stride};
        return trajectory_dict(integrate(make_cds_rhs(g, coupling_for(beta)), to_field(theta0), cfg));
      },
      py::arg("graphon"), py::arg("theta0"), py::arg("beta") = 0.0, py::arg("step") = 0.01,
      py::arg("horizon") = 1.0, py::arg("store_stride") = 1);

  m.def(
      "order_parameter",
      [](py::array_t<double> phases) {
        const auto op = order_parameter(to_field(phases));
        return py::make_tuple(op.r, op.psi ? py::cast(*op.psi) : py::none());
      },
      py::arg("phases"), "(r, psi); psi is None when r is numerically zero");
  m.def(
      "linf_distance",
      [](py::array_t<double> a, py::array_t<double> b) { return linf_distance(to_field(a), to_field(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "phase_diameter", [](py::array_t<double> a) { return phase_diameter(to_field(a)); },
      py::arg("phases"));

  m.def("g_bar", &g_bar, py::arg("n"), py::arg("delta"), py::arg("alpha"));
  m.def(
      "positive_system_bound",
      [](double c, double d, double g, double T) { return positive_system_bound({c, d, g, T}); },
      py::arg("c"), py::arg("d"), py::arg("g"), py::arg("T"));
  m.def(
      "beta_threshold_p",
      [](double beta, double n) {
        const auto t = beta_threshold_p(beta, n);
        return py::make_tuple(t.p, t.feasible);
      },
      py::arg("beta"), py::arg("n") = std::numeric_limits<double>::infinity());
  m.def("max_beta_for", &max_beta_for, py::arg("p"), py::arg("n"));
  m.def("connectivity_threshold", &connectivity_threshold, py::arg("n"));

  m.def(
      "solve_initial_frame",
      [](py::array_t<double> theta0) {
        const auto sol = solve_initial_frame(to_field(theta0));
        py::dict d;
        d["gamma"] = sol.state.gamma;
        d["Psi"] = sol.state.Psi;
        d["Theta"] = sol.state.Theta;
        d["psi"] = to_array(sol.frame.psi.values());
        d["residuals"] = py::make_tuple(sol.frame.residual_mean, sol.frame.residual_cos,
                                        sol.frame.residual_sin);
        d["roots"] = sol.roots.size();
        return d;
      },
      py::arg("theta0"));

  py::class_<TrialRecord>(m, "TrialRecord")
      .def_readonly("n", &TrialRecord::n)
      .def_readonly("p", &TrialRecord::p)
      .def_readonly("beta", &TrialRecord::beta)
      .def_readonly("trial_index", &TrialRecord::trial_index)
      .def_readonly("derived_seed", &TrialRecord::derived_seed)
      .def_readonly("connected", &TrialRecord::connected)
      .def_readonly("phase_sync", &TrialRecord::phase_sync)
      .def_readonly("freq_sync", &TrialRecord::freq_sync)
      .def_readonly("final_r", &TrialRecord::final_r)
      .def_readonly("final_diameter", &TrialRecord::final_diameter)
      .def_readonly("final_freq_spread", &TrialRecord::final_freq_spread)
      .def_readonly("diverged", &TrialRecord::diverged);

  m.def(
      "run_phase_diagram",
      [](const std::string& json_config) {
        const auto result = run_phase_diagram(parse_experiment_config(json_config));
        py::list cells;
        for (const auto& c : result.cells) {
          py::dict d;
          d["n"] = c.n;
          d["p"] = c.p;
          d["beta"] = c.beta;
          d["trials"] = c.trials;
          d["freq_sync_fraction"] = c.freq_sync_fraction();
          d["phase_sync_fraction"] = c.phase_sync_fraction();
          d["connected_fraction"] = c.connected_fraction();
          cells.append(d);
        }
        return py::make_tuple(cells, result.records);
      },
      py::arg("json_config"), "Runs the sweep described by a JSON config; returns (cells, records).");
  m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("n_index"),
        py::arg("p_index"), py::arg("beta_index"), py::arg("trial_index"));
}
