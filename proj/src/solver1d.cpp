#include "capillar/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "capillar/errors.hpp"

namespace capillar {

void Grid1D::validate() const {
  if (!(std::isfinite(x0) && std::isfinite(x1) && x1 > x0)) {
    throw Error(ErrorKind::InvalidParameter, "grid requires x1 > x0");
  }
  if (n_cells < 2) throw Error(ErrorKind::InvalidParameter, "n_cells must be > 1");
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::InvalidParameter, "cfl must lie in (0, 1]");
  if (!(std::isfinite(t_end) && t_end > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "t_end must be > 0");
  }
  if (!(subcycle_max_dt_fraction > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "subcycle_max_dt_fraction must be > 0");
  }
  if (output_every < 1) throw Error(ErrorKind::InvalidParameter, "output_every must be >= 1");
  if (!(floors.eps_frac >= 0.0 && floors.eps_frac < 0.5)) {
    throw Error(ErrorKind::InvalidParameter, "eps_frac must lie in [0, 0.5)");
  }
  if (!(floors.a_min >= 0.0)) throw Error(ErrorKind::InvalidParameter, "a_min must be >= 0");
}

double effective_sound_speed(const PrimCell& cell, const ModelParams& params) {
  const double dp = quasi_pressure_gradient(cell, params)[kRho];
  if (std::isnan(dp)) throw Error(ErrorKind::StateInvalid, "non-finite state in sound speed");
  if (!(dp >= 0.0)) {
    throw Error(ErrorKind::ComplexEigenvalues, "d p_hat / d rho < 0: hyperbolicity lost");
  }
  return std::sqrt(dp);
}

double max_wave_speed(const Fields& fields, const ModelParams& params) {
  double s = 0.0;
  for (const PrimCell& c : fields) s = std::max(s, std::abs(c.u) + effective_sound_speed(c, params));
  return s;
}

Monitors compute_monitors(const Fields& fields, const Grid1D& grid, const ModelParams& params) {
  Monitors m;
  const double dx = grid.dx();
  for (std::size_t k = 0; k < kTrackedScalars.size(); ++k) {
    m.scalar_ranges[k] = {std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity()};
  }
  for (const PrimCell& c : fields) {
    m.total_mass += c.rho * dx;
    m.total_y_mass += c.rho * c.y * dx;
    m.total_momentum += c.rho * c.u * dx;
    m.total_energy += total_energy_density(c, params) * dx;
    m.interfacial_entropy_integral += c.a_i * interfacial_entropy(c.thermo()) * dx;
    for (std::size_t k = 0; k < kTrackedScalars.size(); ++k) {
      const double v = c.get(kTrackedScalars[k]);
      m.scalar_ranges[k].min = std::min(m.scalar_ranges[k].min, v);
      m.scalar_ranges[k].max = std::max(m.scalar_ranges[k].max, v);
    }
  }
  return m;
}

namespace {

constexpr int kNumCons = 6;
using Cons = std::array<double, kNumCons>;

// Conserved block: rho y, rho (1-y), rho u, rho y s1, rho (1-y) s2, a_i s_i.
Cons to_conserved(const PrimCell& c) {
  const double m1 = c.rho * c.y;
  const double m2 = c.rho * (1.0 - c.y);
  const double sigma = c.rho * (c.s - c.y * c.s1 - (1.0 - c.y) * c.s2);
  return {m1, m2, c.rho * c.u, m1 * c.s1, m2 * c.s2, sigma};
}

struct FaceInput {
  Cons U;
  double u;
  double flux_pressure;
  double speed;  // |u| + c_eff
};

FaceInput face_input(const PrimCell& c, const ModelParams& params) {
  return {to_conserved(c), c.u, p_hat(c, params),
          std::abs(c.u) + effective_sound_speed(c, params)};
}

/// Index of the neighbour of cell i at offset +-1, honouring the boundary.
int neighbour(int i, int offset, int n, Boundary bc) {
  const int j = i + offset;
  if (j >= 0 && j < n) return j;
  if (bc == Boundary::periodic) return (j + n) % n;
  return i;
}

bool all_finite(const PrimCell& c) {
  for (int v = 0; v < kNumVars; ++v) {
    if (!std::isfinite(c.get(static_cast<Var>(v)))) return false;
  }
  return true;
}

}  // namespace

Fields hyperbolic_step(const Fields& fields, const Grid1D& grid, const ModelParams& params,
                       double dt, double cfl, const Floors& floors, StepDiagnostics& diag) {
  const int n = static_cast<int>(fields.size());
  if (n != grid.n_cells) {
    throw Error(ErrorKind::InvalidParameter, "field size does not match the grid");
  }
  const double dx = grid.dx();

  std::vector<FaceInput> in;
  in.reserve(n);
  double s_max = 0.0;
  for (const PrimCell& c : fields) {
    in.push_back(face_input(c, params));
    s_max = std::max(s_max, in.back().speed);
  }
  if (dt * s_max > cfl * dx * (1.0 + 1e-12)) {
    throw Error(ErrorKind::CflViolation, "dt = " + std::to_string(dt) + " exceeds cfl dx / max speed = " +
                                             std::to_string(cfl * dx / s_max));
  }

  // Face f sits between cells f-1 and f, f = 0..n. Ghost cells come from
  // the boundary rule.
  std::vector<Cons> flux(n + 1);
  std::vector<double> u_face(n + 1);
  for (int f = 0; f <= n; ++f) {
    const int l = f == 0 ? neighbour(0, -1, n, grid.bc) : f - 1;
    const int r = f == n ? neighbour(n - 1, +1, n, grid.bc) : f;
    const FaceInput& L = in[l];
    const FaceInput& R = in[r];
    const double S = std::max(L.speed, R.speed);
    for (int k = 0; k < kNumCons; ++k) {
      double fl = L.U[k] * L.u;
      double fr = R.U[k] * R.u;
      if (k == 2) {
        fl += L.flux_pressure;
        fr += R.flux_pressure;
      }
      flux[f][k] = 0.5 * (fl + fr) - 0.5 * S * (R.U[k] - L.U[k]);
    }
    u_face[f] = 0.5 * (L.u + R.u);
  }

  const double lambda = dt / dx;
  constexpr std::array<Var, 4> kAdvected{kAlpha, kAi, kW, kN};

  Fields out(fields.size());
  for (int i = 0; i < n; ++i) {
    Cons U = in[i].U;
    for (int k = 0; k < kNumCons; ++k) U[k] -= lambda * (flux[i + 1][k] - flux[i][k]);

    PrimCell c;
    const double m1 = U[0];
    const double m2 = U[1];
    c.rho = m1 + m2;
    if (!(c.rho > 0.0) || !std::isfinite(c.rho)) {
      throw Error(ErrorKind::StateInvalid, "non-positive density in cell " + std::to_string(i));
    }
    c.y = m1 / c.rho;
    c.u = U[2] / c.rho;
    c.s1 = m1 != 0.0 ? U[3] / m1 : fields[i].s1;
    c.s2 = m2 != 0.0 ? U[4] / m2 : fields[i].s2;
    c.s = (U[3] + U[4] + U[5]) / c.rho;

    const PrimCell& lc = fields[neighbour(i, -1, n, grid.bc)];
    const PrimCell& rc = fields[neighbour(i, +1, n, grid.bc)];
    const double u_left = std::max(u_face[i], 0.0);
    const double u_right = std::min(u_face[i + 1], 0.0);
    for (Var v : kAdvected) {
      const double phi = fields[i].get(v);
      c.set(v, phi - lambda * (u_left * (phi - lc.get(v)) + u_right * (rc.get(v) - phi)));
    }

    // Floors on y, alpha, a_i. Clamping y or a_i keeps the conserved
    // entropy densities, so s and s_i are rebuilt from them.
    MixtureState th = c.thermo();
    const int moved = clamp_to_floors(th, floors);
    if (moved > 0) {
      diag.clamp_count += moved;
      c.y = th.y;
      c.alpha = th.alpha;
      c.a_i = th.a_i;
    }
    if (!all_finite(c)) {
      throw Error(ErrorKind::StateInvalid, "non-finite state in cell " + std::to_string(i));
    }
    out[i] = c;
  }
  return out;
}

SourceState integrate_rk2(const SourceRhs& rhs, SourceState st, double dt, long substeps) {
  const double h = dt / static_cast<double>(substeps);
  auto axpy = [](const SourceState& a, double k, const SourceState& b) {
    return SourceState{a.alpha + k * b.alpha, a.a_i + k * b.a_i, a.w + k * b.w, a.n + k * b.n};
  };
  for (long k = 0; k < substeps; ++k) {
    const SourceState k1 = rhs(st);
    const SourceState k2 = rhs(axpy(st, h, k1));
    st = {st.alpha + 0.5 * h * (k1.alpha + k2.alpha), st.a_i + 0.5 * h * (k1.a_i + k2.a_i),
          st.w + 0.5 * h * (k1.w + k2.w), st.n + 0.5 * h * (k1.n + k2.n)};
  }
  return st;
}

namespace {

constexpr long kMaxSubsteps = 1'000'000;

/// Fastest linearised rate of the per-cell source ODE.
double source_rate(const PrimCell& cell, const ModelParams& params) {
  const ComponentPotentials c = eval_components(cell.thermo(), params.materials);
  // alpha'' = (p1 - p2)/m with d(p1 - p2)/d alpha = -K.
  const double K = c.phase1.c2 / (c.view.tau1 * cell.alpha) +
                   c.phase2.c2 / (c.view.tau2 * (1.0 - cell.alpha));
  const double omega_w = std::sqrt(std::abs(K) / params.m);
  // a_i'' = sigma gamma_i / nu with gamma_i = gamma0 - theta/2 (Sigma/a_i)^2.
  const double s_i = c.view.s_i;
  const double omega_n =
      std::sqrt(std::abs(params.materials.ieos.theta * s_i * s_i / cell.a_i) / params.nu);
  return std::max({omega_w, omega_n, params.lambda_w, params.lambda_n});
}

}  // namespace

long required_substeps(const PrimCell& cell, const ModelParams& params, double dt,
                       double max_dt_fraction) {
  const double rate = source_rate(cell, params);
  const double count = std::ceil(dt * rate / max_dt_fraction);
  if (!(count <= static_cast<double>(kMaxSubsteps))) {
    throw Error(ErrorKind::SubcycleLimit, "source stiffness needs " + std::to_string(count) +
                                              " substeps (limit 1e6)");
  }
  return std::max(1L, static_cast<long>(count));
}

Fields source_step(const Fields& fields, const ModelParams& params, double dt,
                   const SolverConfig& config, StepDiagnostics& diag) {
  if (config.source_integrator == SourceIntegrator::none) return fields;
  Fields out = fields;
  for (PrimCell& cell : out) {
    const PrimCell frozen = cell;
    const Floors& floors = config.floors;
    SourceRhs rhs = [&](const SourceState& st) {
      PrimCell c = frozen;
      c.alpha = std::clamp(st.alpha, floors.eps_frac, 1.0 - floors.eps_frac);
      c.a_i = std::max(st.a_i, floors.a_min);
      c.w = st.w;
      c.n = st.n;
      // s is fixed, so s_i = (a_i s_i)/a_i follows a_i automatically.
      const SourceRates r = source_terms(c, params);
      return SourceState{r.alpha, r.a_i, r.w, r.n};
    };
    const long substeps = config.source_integrator == SourceIntegrator::subcycled_rk2
                              ? required_substeps(cell, params, dt, config.subcycle_max_dt_fraction)
                              : 1;
    diag.substeps += substeps;
    const SourceState res = integrate_rk2(rhs, {cell.alpha, cell.a_i, cell.w, cell.n}, dt, substeps);
    cell.alpha = res.alpha;
    cell.a_i = res.a_i;
    cell.w = res.w;
    cell.n = res.n;

    MixtureState th = cell.thermo();
    const int moved = clamp_to_floors(th, config.floors);
    if (moved > 0) {
      diag.clamp_count += moved;
      cell.alpha = th.alpha;
      cell.a_i = th.a_i;
      cell.y = th.y;
    }
    if (!all_finite(cell)) throw Error(ErrorKind::StateInvalid, "non-finite state after source step");
  }
  return out;
}

EnergyBalance energy_balance(const Fields& before, const Fields& after, const Grid1D& grid,
                             const ModelParams& params, double dt) {
  const int n = static_cast<int>(before.size());
  const double dx = grid.dx();
  std::vector<double> g_hat(n), g_p(n), e0(n), e1(n);
  for (int i = 0; i < n; ++i) {
    const PrimCell& c = before[i];
    e0[i] = total_energy_density(c, params);
    e1[i] = total_energy_density(after[i], params);
    const double p = eval_mixture(c.thermo(), params.materials).p;
    g_hat[i] = (e0[i] + p_hat(c, params)) * c.u;
    g_p[i] = (e0[i] + p) * c.u;
  }
  EnergyBalance b;
  for (int i = 0; i < n; ++i) {
    const int l = neighbour(i, -1, n, grid.bc);
    const int r = neighbour(i, +1, n, grid.bc);
    const double dE = (e1[i] - e0[i]) / dt;
    // Face averages; the difference of the two faces is (g_r - g_l) / 2.
    b.residual_p_hat += std::abs(dE + 0.5 * (g_hat[r] - g_hat[l]) / dx) * dx;
    b.residual_p += std::abs(dE + 0.5 * (g_p[r] - g_p[l]) / dx) * dx;
  }
  return b;
}

Simulation::Simulation(Fields initial, Grid1D grid, ModelParams params, SolverConfig config)
    : fields_(std::move(initial)), grid_(grid), params_(std::move(params)), config_(config) {
  grid_.validate();
  params_.validate();
  config_.validate();
  if (static_cast<int>(fields_.size()) != grid_.n_cells) {
    throw Error(ErrorKind::InvalidParameter, "initial field size does not match the grid");
  }
  for (const PrimCell& c : fields_) validate(c.thermo(), config_.floors);
}

bool Simulation::done() const noexcept {
  return t_ >= config_.t_end * (1.0 - 1e-14) || steps_ >= config_.max_steps;
}

double Simulation::step() {
  const double dx = grid_.dx();
  double dt = config_.cfl * dx / max_wave_speed(fields_, params_);
  if (t_ + dt > config_.t_end) dt = config_.t_end - t_;

  const bool sources = config_.source_integrator != SourceIntegrator::none;
  Fields f;
  StepDiagnostics diag;
  // The half source step can raise c_eff; if the hyperbolic stage would then
  // violate the CFL bound the whole step is redone with a smaller dt.
  for (int attempt = 0;; ++attempt) {
    diag = {};
    f = sources ? source_step(fields_, params_, 0.5 * dt, config_, diag) : fields_;
    const double dt_max = config_.cfl * dx / max_wave_speed(f, params_);
    if (dt <= dt_max) break;
    if (attempt == 20) {
      throw Error(ErrorKind::CflViolation, "no admissible dt after 20 reductions");
    }
    dt = 0.9 * dt_max;
  }
  f = hyperbolic_step(f, grid_, params_, dt, config_.cfl, config_.floors, diag);
  if (sources) f = source_step(f, params_, 0.5 * dt, config_, diag);

  last_balance_ = energy_balance(fields_, f, grid_, params_, dt);
  diag_.clamp_count += diag.clamp_count;
  diag_.substeps += diag.substeps;
  fields_ = std::move(f);
  t_ += dt;
  ++steps_;
  if (t_ > config_.t_end * (1.0 - 1e-14)) t_ = config_.t_end;
  return dt;
}

Monitors Simulation::monitors() const {
  Monitors m = compute_monitors(fields_, grid_, params_);
  m.t = t_;
  m.clamp_count = diag_.clamp_count;
  return m;
}

Trajectory advance(const Fields& initial, const Grid1D& grid, const ModelParams& params,
                   const SolverConfig& config,
                   const std::function<void(const Simulation&)>& on_step) {
  Simulation sim(initial, grid, params, config);
  Trajectory traj;
  traj.monitors.push_back(sim.monitors());
  while (!sim.done()) {
    sim.step();
    if (on_step) on_step(sim);
    if (sim.steps() % config.output_every == 0 || sim.done()) {
      traj.monitors.push_back(sim.monitors());
    }
  }
  traj.final_fields = sim.fields();
  traj.steps = sim.steps();
  traj.last_energy_balance = sim.last_energy_balance();
  return traj;
}

}  // namespace capillar
