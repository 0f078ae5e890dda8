#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "capillar/app.hpp"
#include "capillar/config.hpp"
#include "capillar/equilibrium.hpp"
#include "capillar/errors.hpp"
#include "capillar/solver1d.hpp"

namespace py = pybind11;
using namespace capillar;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict phase_dict(const PhasePotentials& k) {
  py::dict d;
  d["e"] = k.e;
  d["p"] = k.p;
  d["T"] = k.T;
  d["mu"] = k.mu;
  d["c2"] = k.c2;
  d["dp_ds"] = k.dp_ds;
  return d;
}

// Reports are returned as parsed JSON, as the CLI prints them.
py::tuple run_command(const std::string& command, const std::string& config,
                      std::optional<std::string> out_dir) {
  AppOptions o;
  o.command = command;
  o.config_path = config;
  o.out_dir = std::move(out_dir);
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_app(o, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

py::dict fields_dict(const Fields& f, const Grid1D& g) {
  py::dict d;
  std::vector<double> x(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) x[i] = g.center(static_cast<int>(i));
  d["x"] = x;
  for (int v = 0; v < kNumVars; ++v) {
    std::vector<double> col(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) col[i] = f[i].get(static_cast<Var>(v));
    d[kVarNames[v]] = col;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-phase fluid-interface model: thermodynamics, equilibrium, spectra and a 1D solver";

  py::register_exception<Error>(m, "CapillarError", PyExc_RuntimeError);

  py::class_<PhaseEos>(m, "PhaseEos")
      .def(py::init<>())
      .def_readwrite("gamma", &PhaseEos::gamma)
      .def_readwrite("c_v", &PhaseEos::c_v)
      .def_readwrite("p_inf", &PhaseEos::p_inf)
      .def_readwrite("q", &PhaseEos::q)
      .def_readwrite("tau_ref", &PhaseEos::tau_ref)
      .def_readwrite("T_ref", &PhaseEos::T_ref)
      .def_readwrite("s_ref", &PhaseEos::s_ref)
      .def("validate", &PhaseEos::validate);

  py::class_<InterfaceEos>(m, "InterfaceEos")
      .def(py::init<>())
      .def_readwrite("gamma0", &InterfaceEos::gamma0)
      .def_readwrite("T_ref_i", &InterfaceEos::T_ref_i)
      .def_readwrite("theta", &InterfaceEos::theta)
      .def("validate", &InterfaceEos::validate);

  py::class_<Materials>(m, "Materials")
      .def(py::init<>())
      .def(py::init<PhaseEos, PhaseEos, InterfaceEos>(), py::arg("eos1"), py::arg("eos2"), py::arg("interface"))
      .def_readwrite("eos1", &Materials::eos1)
      .def_readwrite("eos2", &Materials::eos2)
      .def_readwrite("interface", &Materials::ieos)
      .def("validate", &Materials::validate);

  py::class_<MixtureState>(m, "MixtureState")
      .def(py::init<>())
      .def(py::init<double, double, double, double, double, double, double>(), py::arg("rho"), py::arg("s"),
           py::arg("s1"), py::arg("s2"), py::arg("a_i"), py::arg("y"), py::arg("alpha"))
      .def_readwrite("rho", &MixtureState::rho)
      .def_readwrite("s", &MixtureState::s)
      .def_readwrite("s1", &MixtureState::s1)
      .def_readwrite("s2", &MixtureState::s2)
      .def_readwrite("a_i", &MixtureState::a_i)
      .def_readwrite("y", &MixtureState::y)
      .def_readwrite("alpha", &MixtureState::alpha)
      .def("__repr__", [](const MixtureState& s) {
        std::ostringstream o;
        o << "MixtureState(rho=" << s.rho << ", s=" << s.s << ", s1=" << s.s1 << ", s2=" << s.s2
          << ", a_i=" << s.a_i << ", y=" << s.y << ", alpha=" << s.alpha << ")";
        return o.str();
      });

  py::enum_<SourceSign>(m, "SourceSign")
      .value("lagrangian", SourceSign::lagrangian)
      .value("derived", SourceSign::derived);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("m", &ModelParams::m)
      .def_readwrite("nu", &ModelParams::nu)
      .def_readwrite("materials", &ModelParams::materials)
      .def_readwrite("lambda_w", &ModelParams::lambda_w)
      .def_readwrite("lambda_n", &ModelParams::lambda_n)
      .def_readwrite("source_sign", &ModelParams::source_sign);

  py::class_<PrimCell>(m, "Cell")
      .def(py::init<>())
      .def_readwrite("rho", &PrimCell::rho)
      .def_readwrite("u", &PrimCell::u)
      .def_readwrite("y", &PrimCell::y)
      .def_readwrite("alpha", &PrimCell::alpha)
      .def_readwrite("a_i", &PrimCell::a_i)
      .def_readwrite("w", &PrimCell::w)
      .def_readwrite("n", &PrimCell::n)
      .def_readwrite("s", &PrimCell::s)
      .def_readwrite("s1", &PrimCell::s1)
      .def_readwrite("s2", &PrimCell::s2)
      .def("thermo", &PrimCell::thermo);

  m.def("eval_phase", [](const PhaseEos& e, double tau, double s) { return phase_dict(eval_phase(e, tau, s)); },
        py::arg("eos"), py::arg("tau"), py::arg("s"));
  m.def(
      "eval_interface",
      [](const InterfaceEos& i, double s_i) {
        const InterfacePotentials k = eval_interface(i, s_i);
        py::dict d;
        d["e_i"] = k.e_i;
        d["T_i"] = k.T_i;
        d["gamma_i"] = k.gamma_i;
        return d;
      },
      py::arg("interface"), py::arg("s_i"));
  m.def(
      "gibbs_residuals",
      [](const PhaseEos& e, double tau, double s, double h) {
        const GibbsResiduals r = verify_gibbs_phase(e, tau, s, h);
        return py::make_tuple(r.first, r.second);
      },
      py::arg("eos"), py::arg("tau"), py::arg("s"), py::arg("h") = kDefaultGibbsStep);

  m.def(
      "eval_mixture",
      [](const MixtureState& st, const Materials& mat) {
        const MixturePotentials k = eval_mixture(st, mat);
        const ComponentPotentials c = eval_components(st, mat);
        py::dict d;
        d["e"] = k.e;
        d["T"] = k.T ? py::cast(*k.T) : py::none();
        d["p"] = k.p;
        d["mu"] = k.mu;
        d["omega"] = k.omega;
        d["phase1"] = phase_dict(c.phase1);
        d["phase2"] = phase_dict(c.phase2);
        d["gamma_i"] = c.iface.gamma_i;
        d["s_i"] = c.view.s_i;
        return d;
      },
      py::arg("state"), py::arg("materials"));
  m.def("energy_density", &energy_density, py::arg("state"), py::arg("materials"));

  py::enum_<ClosureKind>(m, "ClosureKind")
      .value("spherical", ClosureKind::spherical)
      .value("planar", ClosureKind::planar);
  py::enum_<EquilibriumMode>(m, "EquilibriumMode")
      .value("full", EquilibriumMode::full)
      .value("frozen_y", EquilibriumMode::frozen_y);

  py::class_<GeometricClosure>(m, "GeometricClosure")
      .def(py::init<>())
      .def(py::init<ClosureKind, double>(), py::arg("kind"), py::arg("n_b") = 0.0)
      .def_readwrite("kind", &GeometricClosure::kind)
      .def_readwrite("n_b", &GeometricClosure::n_b)
      .def("area", &GeometricClosure::area);

  py::class_<EquilibriumProblem>(m, "EquilibriumProblem")
      .def(py::init<>())
      .def_readwrite("tau", &EquilibriumProblem::tau)
      .def_readwrite("s", &EquilibriumProblem::s)
      .def_readwrite("closure", &EquilibriumProblem::closure)
      .def_readwrite("mode", &EquilibriumProblem::mode)
      .def_readwrite("y", &EquilibriumProblem::y)
      .def_readwrite("tol", &EquilibriumProblem::tol)
      .def_readwrite("max_iter", &EquilibriumProblem::max_iter);

  m.def(
      "solve_equilibrium",
      [](const EquilibriumProblem& pb, const MixtureState& guess, const Materials& mat) {
        const EquilibriumSolution sol = solve_equilibrium(pb, guess, mat);
        py::dict d;
        d["state"] = sol.state;
        d["iterations"] = sol.iterations;
        d["residual_norm"] = sol.residual_norm;
        d["radius"] = young_laplace_radius(sol.state);
        return d;
      },
      py::arg("problem"), py::arg("guess"), py::arg("materials"));

  m.def(
      "spectrum",
      [](const PrimCell& c, const ModelParams& prm) { return to_python(eigen_report(c, prm)); },
      py::arg("cell"), py::arg("params"),
      "Analytic and numeric eigenvalues of the quasilinear matrix at one state.");

  m.def(
      "simulate",
      [](const std::string& config) {
        const RunConfig cfg = load_config(config);
        if (!cfg.grid || !cfg.ic || !cfg.time) throw Error(ErrorKind::ConfigInvalid, "grid, ic and time are required");
        SolverConfig time = *cfg.time;
        time.floors = cfg.floors;
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = advance(initial_fields(cfg), *cfg.grid, cfg.params, time);
        }
        py::dict d = fields_dict(t.final_fields, *cfg.grid);
        py::list mons;
        for (const Monitors& mo : t.monitors) mons.append(to_python(monitors_json(mo)));
        d["monitors"] = mons;
        d["steps"] = t.steps;
        return d;
      },
      py::arg("config"), "Runs a config to t_end and returns the final fields and the monitor series.");

  m.def("run_command", &run_command, py::arg("command"), py::arg("config"), py::arg("out_dir") = py::none(),
        "Runs a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
