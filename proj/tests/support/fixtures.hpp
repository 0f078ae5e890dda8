#pragma once
// Shared materials and reference formulas for the test suites. The inverse
// stiffened-gas relations below are written out independently of the
// library so that target states can be built without calling it.

#include <cmath>
#include <random>

#include "capillar/model.hpp"

namespace fixtures {

inline capillar::PhaseEos air() {
  capillar::PhaseEos e;
  e.gamma = 1.4;
  e.c_v = 718.0;
  e.tau_ref = 0.8616;  // p = 1e5 Pa at T_ref = 300 K
  e.T_ref = 300.0;
  return e;
}

inline capillar::PhaseEos helium() {
  capillar::PhaseEos e;
  e.gamma = 1.67;
  e.c_v = 3116.0;
  e.tau_ref = 6.26316;
  e.T_ref = 300.0;
  return e;
}

/// Stiffened liquid, p = 1e5 Pa at (tau_ref, T_ref).
inline capillar::PhaseEos liquid() {
  capillar::PhaseEos e;
  e.gamma = 2.35;
  e.c_v = 1816.0;
  e.p_inf = 1e9;
  e.T_ref = 300.0;
  e.tau_ref = (e.gamma - 1.0) * e.c_v * e.T_ref / (1e5 + e.p_inf);
  return e;
}

inline capillar::InterfaceEos water_air_interface() {
  capillar::InterfaceEos i;
  i.gamma0 = 0.072;
  i.T_ref_i = 300.0;
  i.theta = 1.0;
  return i;
}

inline capillar::Materials gas_liquid() { return {air(), liquid(), water_air_interface()}; }
inline capillar::Materials gas_gas() { return {air(), helium(), water_air_interface()}; }

/// tau and s of a stiffened gas at given (T, p).
inline double sg_tau(const capillar::PhaseEos& e, double T, double p) {
  return (e.gamma - 1.0) * e.c_v * T / (p + e.p_inf);
}
inline double sg_entropy(const capillar::PhaseEos& e, double T, double p) {
  const double tau = sg_tau(e, T, p);
  return e.s_ref + e.c_v * std::log(T / e.T_ref) + e.c_v * (e.gamma - 1.0) * std::log(tau / e.tau_ref);
}

/// Random valid mixture cell with all ten variables populated.
inline capillar::PrimCell random_cell(std::mt19937_64& rng, const capillar::Materials& mat) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in = [&](double a, double b) { return a + (b - a) * U(rng); };
  capillar::PrimCell c;
  // Phasic volumes within a factor of two of the reference states; y and
  // rho then follow from alpha.
  c.alpha = in(0.05, 0.95);
  const double tau1 = in(0.5, 2.0) * mat.eos1.tau_ref;
  const double tau2 = in(0.5, 2.0) * mat.eos2.tau_ref;
  const double m1 = c.alpha / tau1;
  const double m2 = (1.0 - c.alpha) / tau2;
  c.rho = m1 + m2;
  c.y = m1 / c.rho;
  c.u = in(-50.0, 50.0);
  c.a_i = in(10.0, 1000.0);
  c.w = in(-1.0, 1.0);
  c.n = in(-1.0, 1.0);
  c.s1 = in(-0.3, 0.3) * mat.eos1.c_v;
  c.s2 = in(-0.3, 0.3) * mat.eos2.c_v;
  const double s_i = in(-0.1, 0.1);
  c.s = c.y * c.s1 + (1.0 - c.y) * c.s2 + c.a_i * s_i / c.rho;
  return c;
}

}  // namespace fixtures
