#pragma once

#include <optional>
#include <vector>

#include "capillar/mixture.hpp"

namespace capillar {

enum class ClosureKind { spherical, planar };

/// Links the interfacial area density to the volume fraction.
///
/// spherical: monodisperse bubbles of phase 1 with number density n_b,
///   a_i(alpha) = (36 pi n_b)^(1/3) alpha^(2/3),  a_i'(alpha) = 2/R,  R = 3 alpha / a_i.
/// planar: a_i is held at a constant value, a_i'(alpha) = 0.
struct GeometricClosure {
  ClosureKind kind = ClosureKind::planar;
  double n_b = 0.0;  // m^-3, spherical only

  void validate() const;

  /// Spherical closure only.
  double area(double alpha) const;
  double slope(double alpha, double a_i) const;
};

enum class EquilibriumMode { full, frozen_y };

struct EquilibriumProblem {
  double tau = 1.0;
  double s = 0.0;
  GeometricClosure closure;
  EquilibriumMode mode = EquilibriumMode::full;
  double y = 0.5;  // used in frozen_y mode
  double tol = 1e-10;
  int max_iter = 100;
  double fd_step = 1e-7;  // relative Jacobian step
  int max_halvings = 30;

  void validate() const;
};

/// Nondimensional residuals of the equilibrium conditions:
///   (T1 - T2)/Tbar, (T1 - T_i)/Tbar, (mu1 - mu2)/mubar, (p1 - p2 - gamma_i a_i')/pbar.
struct EquilibriumResidual {
  double thermal_12 = 0.0;
  double thermal_1i = 0.0;
  std::optional<double> chemical;  // omitted in frozen_y mode
  double mechanical = 0.0;

  std::vector<double> values() const;
  double norm() const;  // max-norm
};

EquilibriumResidual equilibrium_residual(const MixtureState& state, const GeometricClosure& closure,
                                         const Materials& mat,
                                         EquilibriumMode mode = EquilibriumMode::full);

struct EquilibriumSolution {
  MixtureState state;
  double residual_norm = 0.0;
  int iterations = 0;
  EquilibriumResidual report;
};

/// Damped Newton iteration with a central finite-difference Jacobian.
///
/// Unknowns are (y, alpha, s1, s_i) in full mode and (alpha, s1, s_i) in
/// frozen_y mode; rho = 1/tau and s are fixed, s2 follows from the entropy
/// balance and a_i from the closure (planar: a_i of the guess).
EquilibriumSolution solve_equilibrium(const EquilibriumProblem& problem, const MixtureState& guess,
                                      const Materials& mat, const Floors& floors = {});

/// R = 3 alpha / a_i.
double young_laplace_radius(const MixtureState& state);

}  // namespace capillar
