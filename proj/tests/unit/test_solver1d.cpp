#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/fixtures.hpp"
#include "capillar/errors.hpp"
#include "capillar/solver1d.hpp"

using namespace capillar;

namespace {

ModelParams gas_gas_params() {
  ModelParams p;
  p.materials = fixtures::gas_gas();
  p.m = 1e-3;
  p.nu = 1e-3;
  p.source_sign = SourceSign::derived;
  return p;
}

/// Both phases at 1e5 Pa and 300 K with no interfacial entropy.
PrimCell rest_cell(const Materials& mat, double alpha, double u = 0.0) {
  PrimCell c;
  c.alpha = alpha;
  const double m1 = alpha / mat.eos1.tau_ref;
  const double m2 = (1.0 - alpha) / mat.eos2.tau_ref;
  c.rho = m1 + m2;
  c.y = m1 / c.rho;
  c.u = u;
  c.a_i = 100.0;
  c.s1 = c.s2 = c.s = 0.0;
  return c;
}

Fields smooth_field(const Grid1D& g, const Materials& mat) {
  Fields f(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    const double phase = 2.0 * std::numbers::pi * (g.center(i) - g.x0) / (g.x1 - g.x0);
    f[i] = rest_cell(mat, 0.5 + 0.2 * std::sin(phase), 20.0 * std::cos(phase));
    f[i].a_i = 100.0 + 30.0 * std::sin(phase);
    f[i].s1 = 10.0 * std::cos(phase);
    f[i].s = f[i].y * f[i].s1;
  }
  return f;
}

double max_stable_dt(const Fields& f, const Grid1D& g, const ModelParams& p, double cfl) {
  return cfl * g.dx() / max_wave_speed(f, p);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("grid and solver configuration validation") {
  Grid1D g;
  g.x1 = g.x0;
  CHECK(kind_of([&] { g.validate(); }) == ErrorKind::InvalidParameter);
  g = Grid1D{};
  g.n_cells = 1;
  CHECK(kind_of([&] { g.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(Grid1D{0.0, 2.0, 4}.center(1) == 0.75);

  SolverConfig c;
  c.t_end = 1.0;
  CHECK_NOTHROW(c.validate());
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.cfl = 0.5;
  c.t_end = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("uniform states are preserved exactly") {
  const ModelParams prm = gas_gas_params();
  for (Boundary bc : {Boundary::periodic, Boundary::transmissive}) {
    const Grid1D g{0.0, 1.0, 16, bc};
    PrimCell c = rest_cell(prm.materials, 0.3, 12.0);
    c.w = 0.1;
    c.n = -0.2;
    const Fields f(g.n_cells, c);
    StepDiagnostics d;
    const Fields out = hyperbolic_step(f, g, prm, max_stable_dt(f, g, prm, 0.9), 0.9, {}, d);
    for (const PrimCell& o : out) {
      for (int v = 0; v < kNumVars; ++v) {
        CHECK(o.get(Var(v)) == doctest::Approx(c.get(Var(v))).epsilon(1e-14));
      }
    }
    CHECK(d.clamp_count == 0);
  }
}

TEST_CASE("advected scalars obey a discrete maximum principle") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 1.0, 64, Boundary::periodic};
  Fields f = smooth_field(g, prm.materials);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (PrimCell& c : f) {
    c.w = U(rng);
    c.n = U(rng);
  }
  const Monitors before = compute_monitors(f, g, prm);
  StepDiagnostics d;
  const Fields out = hyperbolic_step(f, g, prm, max_stable_dt(f, g, prm, 0.5), 0.5, {}, d);
  const Monitors after = compute_monitors(out, g, prm);
  for (std::size_t k = 0; k < kTrackedScalars.size(); ++k) {
    const Var v = kTrackedScalars[k];
    if (v != kAlpha && v != kAi && v != kW && v != kN) continue;
    CHECK(after.scalar_ranges[k].min >= before.scalar_ranges[k].min);
    CHECK(after.scalar_ranges[k].max <= before.scalar_ranges[k].max);
  }
}

TEST_CASE("monitors integrate by the midpoint rule") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 2.0, 2, Boundary::periodic};
  PrimCell a = rest_cell(prm.materials, 0.2, 5.0);
  PrimCell b = rest_cell(prm.materials, 0.7, -3.0);
  b.s = b.y * b.s1 + (1.0 - b.y) * b.s2 + 0.4 * b.a_i / b.rho;  // s_i = 0.4
  const Monitors m = compute_monitors({a, b}, g, prm);
  CHECK(m.total_mass == doctest::Approx(a.rho + b.rho).epsilon(1e-15));
  CHECK(m.total_y_mass == doctest::Approx(a.rho * a.y + b.rho * b.y).epsilon(1e-15));
  CHECK(m.total_momentum == doctest::Approx(5.0 * a.rho - 3.0 * b.rho).epsilon(1e-15));
  CHECK(m.interfacial_entropy_integral == doctest::Approx(0.4 * b.a_i).epsilon(1e-12));
  CHECK(m.total_energy == doctest::Approx(legendre_energy_density(a, prm) + legendre_energy_density(b, prm))
                              .epsilon(1e-13));
  CHECK(m.scalar_ranges[1].min == 0.2);
  CHECK(m.scalar_ranges[1].max == 0.7);
}

TEST_CASE("periodic sources-off run conserves mass, y-mass, momentum and entropy") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 1.0, 50, Boundary::periodic};
  SolverConfig cfg;
  cfg.source_integrator = SourceIntegrator::none;
  cfg.t_end = 1.0;
  cfg.max_steps = 200;
  const Fields f0 = smooth_field(g, prm.materials);
  auto entropy = [&](const Fields& f) {
    double s = 0.0;
    for (const PrimCell& c : f) s += c.rho * c.s * g.dx();
    return s;
  };
  const Trajectory t = advance(f0, g, prm, cfg);
  CHECK(t.steps == 200);
  const Monitors& a = t.monitors.front();
  const Monitors& b = t.monitors.back();
  CHECK(std::abs(b.total_mass - a.total_mass) <= 1e-13 * a.total_mass);
  CHECK(std::abs(b.total_y_mass - a.total_y_mass) <= 1e-13 * a.total_y_mass);
  // Momentum starts at zero; measure against the momentum scale.
  double p_scale = 0.0;
  for (const PrimCell& c : f0) p_scale += std::abs(c.rho * c.u) * g.dx();
  CHECK(std::abs(b.total_momentum - a.total_momentum) <= 1e-13 * p_scale);
  CHECK(entropy(t.final_fields) == doctest::Approx(entropy(f0)).epsilon(1e-12));
}

TEST_CASE("momentum is conserved with sources on") {
  ModelParams prm = gas_gas_params();
  prm.lambda_w = 5.0;
  const Grid1D g{0.0, 1.0, 40, Boundary::periodic};
  SolverConfig cfg;
  cfg.source_integrator = SourceIntegrator::subcycled_rk2;
  cfg.t_end = 1.0;
  cfg.max_steps = 100;
  const Fields f0 = smooth_field(g, prm.materials);
  double p_scale = 0.0;
  for (const PrimCell& c : f0) p_scale += std::abs(c.rho * c.u) * g.dx();
  const Trajectory t = advance(f0, g, prm, cfg);
  CHECK(std::abs(t.monitors.back().total_momentum - t.monitors.front().total_momentum) <= 1e-13 * p_scale);
  CHECK(t.monitors.back().total_mass == doctest::Approx(t.monitors.front().total_mass).epsilon(1e-13));
}

TEST_CASE("source step leaves a fixed point alone and touches only its block") {
  ModelParams prm = gas_gas_params();
  prm.materials.ieos.gamma0 = 0.0;
  SolverConfig cfg;
  cfg.t_end = 1.0;
  const Fields f{rest_cell(prm.materials, 0.3), rest_cell(prm.materials, 0.6)};
  StepDiagnostics d;
  const Fields out = source_step(f, prm, 1e-3, cfg, d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(out[i].alpha == doctest::Approx(f[i].alpha).epsilon(1e-12));
    CHECK(std::abs(out[i].w) < 1e-9);
  }

  prm = gas_gas_params();
  Fields g{rest_cell(prm.materials, 0.3, 4.0)};
  g[0].w = 0.5;
  g[0].n = 0.2;
  g[0].s1 = 30.0;
  g[0].s = g[0].y * g[0].s1 + 0.1 * g[0].a_i / g[0].rho;
  const Fields o = source_step(g, prm, 1e-4, cfg, d);
  for (Var v : {kRho, kU, kY, kS, kS1, kS2}) CHECK(o[0].get(v) == g[0].get(v));
  CHECK(o[0].alpha != g[0].alpha);
  CHECK(o[0].a_i != g[0].a_i);

  cfg.source_integrator = SourceIntegrator::none;
  const Fields same = source_step(g, prm, 1e-4, cfg, d);
  CHECK(same[0].alpha == g[0].alpha);
  CHECK(same[0].w == g[0].w);
}

TEST_CASE("Heun integration of a harmonic oscillator is second order") {
  const double omega = 2.0 * std::numbers::pi;
  const SourceRhs rhs = [&](const SourceState& s) { return SourceState{s.w, 0.0, -omega * omega * s.alpha, 0.0}; };
  auto error = [&](long steps) {
    const SourceState end = integrate_rk2(rhs, {1.0, 0.0, 0.0, 0.0}, 1.0, steps);
    return std::hypot(end.alpha - 1.0, end.w / omega);
  };
  const double e1 = error(200);
  const double e2 = error(400);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

  // Oscillator energy drift per period at 200 steps per period.
  const SourceState end = integrate_rk2(rhs, {1.0, 0.0, 0.0, 0.0}, 1.0, 200);
  const double energy = end.alpha * end.alpha + end.w * end.w / (omega * omega);
  CHECK(std::abs(energy - 1.0) < 1e-2);
}

TEST_CASE("Heun integration of linear decay") {
  const double lambda = 3.0;
  const SourceRhs rhs = [&](const SourceState& s) { return SourceState{0.0, 0.0, -lambda * s.w, 0.0}; };
  const double h = 0.01;
  const SourceState end = integrate_rk2(rhs, {0.0, 0.0, 1.0, 0.0}, 1.0, 100);
  // Heun's amplification factor raised to the number of steps.
  CHECK(end.w == doctest::Approx(std::pow(1.0 - h * lambda + 0.5 * h * h * lambda * lambda, 100)).epsilon(1e-13));
  CHECK(end.w == doctest::Approx(std::exp(-lambda)).epsilon(1e-3));
}

TEST_CASE("substep counts") {
  const ModelParams prm = gas_gas_params();
  const PrimCell c = rest_cell(prm.materials, 0.4);
  const long n1 = required_substeps(c, prm, 1e-5, 0.05);
  const long n2 = required_substeps(c, prm, 2e-5, 0.05);
  CHECK(n1 >= 1);
  CHECK(n2 >= 2 * n1 - 1);
  CHECK(n2 <= 2 * n1);
  CHECK(required_substeps(c, prm, 1e-300, 0.05) == 1);
  CHECK(kind_of([&] { required_substeps(c, prm, 1e3, 0.05); }) == ErrorKind::SubcycleLimit);
}

TEST_CASE("hyperbolic step error paths") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 1.0, 8, Boundary::periodic};
  Fields f(g.n_cells, rest_cell(prm.materials, 0.5, 1.0));
  StepDiagnostics d;
  const double dt = max_stable_dt(f, g, prm, 0.5);
  CHECK(kind_of([&] { hyperbolic_step(f, g, prm, 1.1 * dt, 0.5, {}, d); }) == ErrorKind::CflViolation);
  CHECK_NOTHROW(hyperbolic_step(f, g, prm, dt, 0.5, {}, d));

  Fields bad = f;
  bad[3].w = std::nan("");
  CHECK(kind_of([&] { hyperbolic_step(bad, g, prm, dt, 0.5, {}, d); }) == ErrorKind::StateInvalid);

  Fields short_f(3, f[0]);
  CHECK(kind_of([&] { hyperbolic_step(short_f, g, prm, dt, 0.5, {}, d); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("floors are applied and counted") {
  const ModelParams prm = gas_gas_params();
  SolverConfig cfg;
  cfg.t_end = 1.0;
  Fields f{rest_cell(prm.materials, 0.01)};
  f[0].w = -50.0;  // drives alpha through zero
  StepDiagnostics d;
  const Fields out = source_step(f, prm, 1e-2, cfg, d);
  CHECK(d.clamp_count >= 1);
  CHECK(out[0].alpha == cfg.floors.eps_frac);
}

TEST_CASE("simulation lands on t_end and is deterministic") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 1.0, 32, Boundary::transmissive};
  SolverConfig cfg;
  cfg.source_integrator = SourceIntegrator::subcycled_rk2;
  cfg.t_end = 2e-4;
  cfg.output_every = 3;
  Fields f0(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) f0[i] = rest_cell(prm.materials, i < 16 ? 0.9 : 0.1);
  const Trajectory a = advance(f0, g, prm, cfg);
  const Trajectory b = advance(f0, g, prm, cfg);
  CHECK(a.monitors.back().t == cfg.t_end);
  REQUIRE(a.monitors.size() == b.monitors.size());
  CHECK(a.monitors.size() == static_cast<std::size_t>(1 + a.steps / 3 + (a.steps % 3 != 0)));
  for (std::size_t i = 0; i < a.final_fields.size(); ++i) {
    for (int v = 0; v < kNumVars; ++v) CHECK(a.final_fields[i].get(Var(v)) == b.final_fields[i].get(Var(v)));
  }
  CHECK(std::isfinite(a.last_energy_balance.residual_p_hat));
}

TEST_CASE("simulation rejects inconsistent inputs") {
  const ModelParams prm = gas_gas_params();
  const Grid1D g{0.0, 1.0, 4, Boundary::periodic};
  SolverConfig cfg;
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(Simulation(Fields(3, rest_cell(prm.materials, 0.5)), g, prm, cfg), Error);
  Fields f(4, rest_cell(prm.materials, 0.5));
  f[1].alpha = 1.2;
  CHECK_THROWS_AS(Simulation(f, g, prm, cfg), Error);
}

TEST_CASE("mass fraction obeys a max principle under pure advection") {
  ModelParams prm;
  prm.materials = {fixtures::air(), fixtures::air(), fixtures::water_air_interface()};
  const Grid1D g{0.0, 1.0, 50, Boundary::periodic};
  Fields f(g.n_cells);
  for (int i = 0; i < g.n_cells; ++i) {
    PrimCell& c = f[i];
    c.rho = 1.0 / fixtures::air().tau_ref;
    c.u = 30.0;
    c.y = c.alpha = i < 20 ? 0.8 : 0.2;
    c.s1 = c.s2 = c.s = 0.0;
  }
  SolverConfig cfg;
  cfg.source_integrator = SourceIntegrator::none;
  cfg.t_end = 1.0;
  cfg.max_steps = 40;
  double lo = 0.2, hi = 0.8;
  advance(f, g, prm, cfg, [&](const Simulation& s) {
    const Monitors m = s.monitors();
    CHECK(m.scalar_ranges[0].min >= lo - 1e-15);
    CHECK(m.scalar_ranges[0].max <= hi + 1e-15);
    lo = m.scalar_ranges[0].min;
    hi = m.scalar_ranges[0].max;
  });
  CHECK(hi < 0.8);
}
