#pragma once

#include <array>
#include <functional>
#include <vector>

#include "capillar/model.hpp"

namespace capillar {

enum class Boundary { periodic, transmissive };

struct Grid1D {
  double x0 = 0.0;
  double x1 = 1.0;
  int n_cells = 100;
  Boundary bc = Boundary::periodic;

  void validate() const;
  double dx() const noexcept { return (x1 - x0) / n_cells; }
  double center(int i) const noexcept { return x0 + (i + 0.5) * dx(); }
};

enum class SourceIntegrator { none, rk2, subcycled_rk2 };

struct SolverConfig {
  double cfl = 0.5;
  double t_end = 0.0;
  SourceIntegrator source_integrator = SourceIntegrator::rk2;
  /// Largest substep as a fraction of the fastest source time scale
  /// (1/omega of the alpha-w or a_i-n oscillator, or 1/lambda).
  double subcycle_max_dt_fraction = 0.05;
  int output_every = 1;
  Floors floors;
  long max_steps = 100'000'000;

  void validate() const;
};

using Fields = std::vector<PrimCell>;

struct ScalarRange {
  double min = 0.0;
  double max = 0.0;
};

/// Transported scalars whose ranges are tracked, in this order.
inline constexpr std::array<Var, 8> kTrackedScalars{kY, kAlpha, kAi, kW, kN, kS, kS1, kS2};

struct Monitors {
  double t = 0.0;
  double total_mass = 0.0;
  double total_y_mass = 0.0;
  double total_momentum = 0.0;
  double total_energy = 0.0;
  double interfacial_entropy_integral = 0.0;  // integral of a_i s_i
  std::array<ScalarRange, kTrackedScalars.size()> scalar_ranges{};
  long clamp_count = 0;
};

/// Midpoint-rule domain integrals and per-scalar bounds.
Monitors compute_monitors(const Fields& fields, const Grid1D& grid, const ModelParams& params);

struct StepDiagnostics {
  long clamp_count = 0;
  long substeps = 0;
};

/// Acoustic speed sqrt(d p / d rho) of the quasilinear system at one cell.
double effective_sound_speed(const PrimCell& cell, const ModelParams& params);

/// max over cells of |u| + c_eff.
double max_wave_speed(const Fields& fields, const ModelParams& params);

/// One explicit hyperbolic update, sources excluded.
///
/// Rusanov flux on the conserved block (rho y, rho (1-y), rho u) plus the
/// entropy densities (rho y s1, rho (1-y) s2, a_i s_i), all sharing one wave
/// speed per face; velocity upwinding with face-averaged u on the
/// non-conservative scalars (alpha, a_i, w, n).
///
/// Throws CflViolation when dt > cfl dx / max(|u| + c_eff) and StateInvalid
/// when a cell loses positivity or finiteness.
Fields hyperbolic_step(const Fields& fields, const Grid1D& grid, const ModelParams& params,
                       double dt, double cfl, const Floors& floors, StepDiagnostics& diag);

/// The (alpha, a_i, w, n) block of one cell during a source update.
struct SourceState {
  double alpha = 0.0;
  double a_i = 0.0;
  double w = 0.0;
  double n = 0.0;
};

using SourceRhs = std::function<SourceState(const SourceState&)>;

/// Heun (two-stage, second-order) integration of y' = rhs(y) over dt with
/// the given number of equal substeps.
SourceState integrate_rk2(const SourceRhs& rhs, SourceState state, double dt, long substeps = 1);

/// Substep count used by subcycled_rk2 for one cell. Throws SubcycleLimit
/// above 10^6.
long required_substeps(const PrimCell& cell, const ModelParams& params, double dt,
                       double max_dt_fraction);

/// Per-cell ODE update of (alpha, a_i, w, n); rho, u, y, s, s1, s2 frozen.
Fields source_step(const Fields& fields, const ModelParams& params, double dt,
                   const SolverConfig& config, StepDiagnostics& diag);

/// L1 norms of the discrete energy-balance residual over one step,
///   (E^{n+1} - E^n)/dt + (G_{j+1/2} - G_{j-1/2})/dx,
/// with face-averaged flux G = (E + p_hat) u or G = (E + p) u.
struct EnergyBalance {
  double residual_p_hat = 0.0;
  double residual_p = 0.0;
};

EnergyBalance energy_balance(const Fields& before, const Fields& after, const Grid1D& grid,
                             const ModelParams& params, double dt);

/// Strang-split time integration: half source, full hyperbolic, half source.
class Simulation {
public:
  Simulation(Fields initial, Grid1D grid, ModelParams params, SolverConfig config);

  /// Advances one step (shortened to land on t_end). Returns the dt used.
  double step();
  bool done() const noexcept;

  double time() const noexcept { return t_; }
  long steps() const noexcept { return steps_; }
  const Fields& fields() const noexcept { return fields_; }
  const Grid1D& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  const SolverConfig& config() const noexcept { return config_; }
  long clamp_count() const noexcept { return diag_.clamp_count; }
  const EnergyBalance& last_energy_balance() const noexcept { return last_balance_; }

  Monitors monitors() const;

private:
  Fields fields_;
  Grid1D grid_;
  ModelParams params_;
  SolverConfig config_;
  StepDiagnostics diag_;
  EnergyBalance last_balance_;
  double t_ = 0.0;
  long steps_ = 0;
};

struct Trajectory {
  Fields final_fields;
  std::vector<Monitors> monitors;
  long steps = 0;
  EnergyBalance last_energy_balance;
};

/// Runs to t_end, recording monitors at step 0, every output_every steps and
/// at the final step. `on_step` (optional) sees the simulation after each step.
Trajectory advance(const Fields& initial, const Grid1D& grid, const ModelParams& params,
                   const SolverConfig& config,
                   const std::function<void(const Simulation&)>& on_step = {});

}  // namespace capillar
