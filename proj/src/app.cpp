#include "capillar/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "capillar/errors.hpp"

namespace capillar {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string snapshot_csv(const Fields& fields, const Grid1D& grid, const ModelParams& params) {
  std::string s = "x,rho,u,y,alpha,a_i,w,n,s,s1,s2,p,p_hat,E\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const PrimCell& c = fields[i];
    const double p = eval_mixture(c.thermo(), params.materials).p;
    const double row[] = {grid.center(static_cast<int>(i)),
                          c.rho, c.u, c.y, c.alpha, c.a_i, c.w, c.n, c.s, c.s1, c.s2, p,
                          p_hat(c, params), total_energy_density(c, params)};
    for (std::size_t k = 0; k < std::size(row); ++k) {
      if (k) s += ',';
      s += format_double(row[k]);
    }
    s += '\n';
  }
  return s;
}

std::string monitors_csv(const std::vector<Monitors>& series) {
  std::string s = "t,mass,y_mass,momentum,energy,ai_si,clamp_count\n";
  for (const Monitors& m : series) {
    for (double v : {m.t, m.total_mass, m.total_y_mass, m.total_momentum, m.total_energy,
                     m.interfacial_entropy_integral}) {
      s += format_double(v);
      s += ',';
    }
    s += std::to_string(m.clamp_count);
    s += '\n';
  }
  return s;
}

json monitors_json(const Monitors& m) {
  json ranges;
  for (std::size_t k = 0; k < kTrackedScalars.size(); ++k) {
    ranges[kVarNames[kTrackedScalars[k]]] = {m.scalar_ranges[k].min, m.scalar_ranges[k].max};
  }
  return {{"t", m.t},
          {"mass", m.total_mass},
          {"y_mass", m.total_y_mass},
          {"momentum", m.total_momentum},
          {"energy", m.total_energy},
          {"ai_si", m.interfacial_entropy_integral},
          {"clamp_count", m.clamp_count},
          {"scalar_min_max", ranges}};
}

namespace {

json error_json(const Error& e) { return {{"kind", to_string(e.kind())}, {"message", e.what()}}; }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

json phase_sweep(const PhaseEos& eos, const ThermoCheckConfig& tc) {
  const auto tau_r = tc.tau_range.value_or(std::array<double, 2>{0.5 * eos.tau_ref, 2.0 * eos.tau_ref});
  const auto s_r = tc.s_range.value_or(std::array<double, 2>{eos.s_ref - eos.c_v, eos.s_ref + eos.c_v});
  double max_tau = 0.0;
  double max_s = 0.0;
  json j = {{"tau_range", tau_r}, {"s_range", s_r}, {"n", tc.n}};
  try {
    for (double tau : logspace(tau_r[0], tau_r[1], tc.n)) {
      for (double s : linspace(s_r[0], s_r[1], tc.n)) {
        const GibbsResiduals r = verify_gibbs_phase(eos, tau, s, tc.h);
        max_tau = std::max(max_tau, r.first);
        max_s = std::max(max_s, r.second);
      }
    }
  } catch (const Error& e) {
    j["error"] = error_json(e);
    j["pass"] = false;
    return j;
  }
  j["max_residual_p"] = max_tau;
  j["max_residual_T"] = max_s;
  j["pass"] = max_tau < tc.threshold && max_s < tc.threshold;
  return j;
}

json interface_sweep(const InterfaceEos& ieos, const ThermoCheckConfig& tc) {
  json j = {{"s_i_range", tc.s_i_range}, {"n", tc.n_interface}};
  double max_gd = 0.0;
  double max_t = 0.0;
  try {
    for (double s_i : linspace(tc.s_i_range[0], tc.s_i_range[1], tc.n_interface)) {
      const GibbsResiduals r = verify_gibbs_interface(ieos, s_i, tc.h);
      max_gd = std::max(max_gd, r.first);
      max_t = std::max(max_t, r.second);
    }
  } catch (const Error& e) {
    j["error"] = error_json(e);
    j["pass"] = false;
    return j;
  }
  j["max_residual_gibbs_duhem"] = max_gd;
  j["max_residual_T_i"] = max_t;
  j["pass"] = max_gd < tc.threshold && max_t < tc.threshold;
  return j;
}

json potentials_json(const PhasePotentials& k) {
  return {{"T", k.T}, {"p", k.p}, {"mu", k.mu}, {"e", k.e}};
}

}  // namespace

json thermo_report(const RunConfig& cfg, bool& pass) {
  const ThermoCheckConfig& tc = cfg.thermo_check;
  const Materials& mat = cfg.params.materials;
  json j;
  j["h"] = tc.h;
  j["threshold"] = tc.threshold;
  j["phase1"] = phase_sweep(mat.eos1, tc);
  j["phase2"] = phase_sweep(mat.eos2, tc);
  j["interface"] = interface_sweep(mat.ieos, tc);
  pass = j["phase1"]["pass"].get<bool>() && j["phase2"]["pass"].get<bool>() &&
         j["interface"]["pass"].get<bool>();
  j["pass"] = pass;
  return j;
}

json equilibrium_report(const RunConfig& cfg) {
  if (!cfg.equilibrium) throw Error(ErrorKind::ConfigInvalid, "equilibrium: required block missing");
  const EquilibriumConfig& ec = *cfg.equilibrium;
  const Materials& mat = cfg.params.materials;
  const EquilibriumSolution sol = solve_equilibrium(ec.problem, ec.guess, mat, cfg.floors);
  const MixtureState& st = sol.state;
  const ComponentPotentials c = eval_components(st, mat);

  json res = {{"thermal_12", sol.report.thermal_12},
              {"thermal_1i", sol.report.thermal_1i},
              {"mechanical", sol.report.mechanical}};
  if (sol.report.chemical) res["chemical"] = *sol.report.chemical;

  json j;
  j["iterations"] = sol.iterations;
  j["residual_norm"] = sol.residual_norm;
  j["residual"] = res;
  j["state"] = {{"rho", st.rho}, {"s", st.s},   {"y", st.y},
                {"alpha", st.alpha}, {"a_i", st.a_i}, {"s1", st.s1},
                {"s2", st.s2}, {"s_i", c.view.s_i}};
  j["phase1"] = potentials_json(c.phase1);
  j["phase2"] = potentials_json(c.phase2);
  j["interface"] = {{"T_i", c.iface.T_i}, {"gamma_i", c.iface.gamma_i}};
  if (ec.problem.closure.kind == ClosureKind::spherical) {
    const double R = young_laplace_radius(st);
    const double jump = c.phase1.p - c.phase2.p;
    const double laplace = 2.0 * c.iface.gamma_i / R;
    const double scale = std::max(std::abs(c.phase1.p), std::abs(c.phase2.p));
    j["young_laplace"] = {{"R", R},
                          {"p1_minus_p2", jump},
                          {"two_gamma_over_R", laplace},
                          {"residual", std::abs(jump - laplace)},
                          {"relative_residual", std::abs(jump - laplace) / scale}};
  }
  return j;
}

json eigen_report(const PrimCell& cell, const ModelParams& params) {
  const AnalyticSpectrum an = eigen_analytic(cell, params);
  const QuasiSystem q = assemble_quasilinear(cell, params);
  const NumericSpectrum nu = eigen_numeric(q.C);

  json numeric_vals = json::array();
  for (const auto& z : nu.eigenvalues) numeric_vals.push_back({z.real(), z.imag()});

  // Compare the sorted spectra entry by entry.
  std::vector<double> analytic_sorted(an.eigenvalues.begin(), an.eigenvalues.end());
  std::sort(analytic_sorted.begin(), analytic_sorted.end());
  const double scale = std::max({std::abs(cell.u) + an.c_eff, 1.0});
  double max_dev = 0.0;
  for (std::size_t k = 0; k < nu.eigenvalues.size() && k < analytic_sorted.size(); ++k) {
    max_dev = std::max(max_dev, std::abs(nu.eigenvalues[k] - analytic_sorted[k]) / scale);
  }

  auto alt = [&](double speed) {
    return json{{"speed", speed},
                {"eigenvalues", {cell.u - speed, cell.u + speed}},
                {"relative_deviation", std::abs(speed - an.c_eff) / an.c_eff}};
  };

  json j;
  j["state"] = to_json(cell);
  j["analytic"] = {{"u", an.u},
                   {"dp_drho", an.dp_drho},
                   {"c_eff", an.c_eff},
                   {"hyperbolic", an.hyperbolic},
                   {"eigenvalues", an.eigenvalues}};
  j["numeric"] = {{"eigenvalues", numeric_vals},
                  {"eigenvector_condition", nu.eigenvector_condition},
                  {"complete_basis", nu.complete_basis},
                  {"real_spectrum", nu.real_spectrum},
                  {"converged", nu.converged}};
  j["max_relative_deviation"] = max_dev;
  j["printed_formula"] = alt(an.printed_formula_speed);
  j["literal_matrix"] = alt(an.literal_matrix_speed);
  return j;
}

namespace {

std::string snapshot_name(const std::string& prefix, long step) {
  std::string digits = std::to_string(step);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return prefix + "_snap_" + digits + ".csv";
}

int cmd_run(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  if (!cfg.grid) throw Error(ErrorKind::ConfigInvalid, "grid: required block missing");
  if (!cfg.ic) throw Error(ErrorKind::ConfigInvalid, "ic: required block missing");
  if (!cfg.time) throw Error(ErrorKind::ConfigInvalid, "time: required block missing");
  const Fields initial = initial_fields(cfg);
  const std::string& prefix = cfg.output.prefix;

  std::vector<std::string> files;
  std::vector<Monitors> series;
  auto snapshot = [&](const Simulation& sim) {
    const std::string name = snapshot_name(prefix, sim.steps());
    write_file(dir / name, snapshot_csv(sim.fields(), sim.grid(), sim.params()));
    files.push_back(name);
  };

  SolverConfig time = *cfg.time;
  time.floors = cfg.floors;
  Simulation sim(initial, *cfg.grid, cfg.params, time);
  series.push_back(sim.monitors());
  snapshot(sim);

  try {
    while (!sim.done()) {
      sim.step();
      const bool last = sim.done();
      if (sim.steps() % time.output_every == 0 || last) series.push_back(sim.monitors());
      if (last || (cfg.output.every > 0 && sim.steps() % cfg.output.every == 0)) snapshot(sim);
    }
  } catch (const Error& e) {
    // Diagnostic dump of the last accepted state.
    const std::string fields_name = prefix + "_abort_fields.csv";
    write_file(dir / fields_name, snapshot_csv(sim.fields(), sim.grid(), sim.params()));
    write_file(dir / (prefix + "_monitors.csv"), monitors_csv(series));
    json dumpj = {{"error", error_json(e)},
                  {"step", sim.steps()},
                  {"t", sim.time()},
                  {"monitors", monitors_json(sim.monitors())},
                  {"fields", fields_name},
                  {"config", to_json(cfg)}};
    write_file(dir / (prefix + "_abort.json"), dump(dumpj));
    throw;
  }

  const std::string monitors_name = prefix + "_monitors.csv";
  write_file(dir / monitors_name, monitors_csv(series));
  files.push_back(monitors_name);

  const EnergyBalance& eb = sim.last_energy_balance();
  json summary = {{"config", to_json(cfg)},
                  {"steps", sim.steps()},
                  {"t_final", sim.time()},
                  {"initial_monitors", monitors_json(series.front())},
                  {"final_monitors", monitors_json(series.back())},
                  {"energy_balance_last_step",
                   {{"residual_flux_p_hat", eb.residual_p_hat}, {"residual_flux_p", eb.residual_p}}},
                  {"files", files}};
  const std::string text = dump(summary);
  write_file(dir / (prefix + "_summary.json"), text);
  out << text;
  return kExitOk;
}

}  // namespace

int run_app(const AppOptions& opts, std::ostream& out, std::ostream& err) {
  const std::string& cmd = opts.command;
  if (cmd != "run" && cmd != "check-thermo" && cmd != "equilibrium" && cmd != "eigen") {
    err << "error: unknown command '" << cmd << "'\n";
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(opts.config_path);
    if (opts.h) {
      if (!(*opts.h > 0.0)) throw Error(ErrorKind::ConfigInvalid, "--h: must be > 0");
      cfg.thermo_check.h = *opts.h;
    }
    if (opts.threshold) {
      if (!(*opts.threshold > 0.0)) throw Error(ErrorKind::ConfigInvalid, "--threshold: must be > 0");
      cfg.thermo_check.threshold = *opts.threshold;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: ConfigInvalid: " << e.what() << "\n";
    return kExitConfig;
  }

  const fs::path dir = opts.out_dir ? fs::path(*opts.out_dir)
                                    : (cmd == "run" ? fs::path(cfg.output.directory) : fs::path());
  try {
    if (!dir.empty()) fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return kExitConfig;
  }

  auto emit = [&](const json& report, const std::string& suffix) {
    const std::string text = dump(report);
    out << text;
    if (opts.out_dir) write_file(dir / (cfg.output.prefix + "_" + suffix + ".json"), text);
  };

  try {
    if (cmd == "run") return cmd_run(cfg, dir, out);

    if (cmd == "check-thermo") {
      bool pass = false;
      emit(thermo_report(cfg, pass), "check_thermo");
      return pass ? kExitOk : kExitNumerical;
    }

    if (cmd == "equilibrium") {
      if (!cfg.equilibrium) throw Error(ErrorKind::ConfigInvalid, "equilibrium: required block missing");
      json report;
      int code = kExitOk;
      try {
        report = equilibrium_report(cfg);
        report["converged"] = true;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigInvalid) throw;
        report = {{"converged", false}, {"error", error_json(e)}};
        code = kExitNumerical;
      }
      report["problem"] = to_json(cfg)["equilibrium"];
      emit(report, "equilibrium");
      return code;
    }

    // eigen
    if (!cfg.eigen_state) throw Error(ErrorKind::ConfigInvalid, "eigen: required block missing");
    const json report = eigen_report(cfg.eigen_state->resolve(), cfg.params);
    emit(report, "eigen");
    const bool ok = report["analytic"]["hyperbolic"].get<bool>() &&
                    report["numeric"]["real_spectrum"].get<bool>();
    return ok ? kExitOk : kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigInvalid || e.kind() == ErrorKind::IoError ? kExitConfig
                                                                                 : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace capillar
