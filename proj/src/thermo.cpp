#include "capillar/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "capillar/errors.hpp"

namespace capillar {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw Error(ErrorKind::InvalidParameter, std::string(field) + " must be " + rule);
  }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void PhaseEos::validate() const {
  require(finite(gamma) && gamma > 1.0, "gamma", "> 1");
  require(finite(c_v) && c_v > 0.0, "c_v", "> 0");
  require(finite(p_inf) && p_inf >= 0.0, "p_inf", ">= 0");
  require(finite(q), "q", "finite");
  require(finite(tau_ref) && tau_ref > 0.0, "tau_ref", "> 0");
  require(finite(T_ref) && T_ref > 0.0, "T_ref", "> 0");
  require(finite(s_ref), "s_ref", "finite");
}

void InterfaceEos::validate() const {
  require(finite(gamma0) && gamma0 >= 0.0, "gamma0", ">= 0");
  require(finite(T_ref_i) && T_ref_i > 0.0, "T_ref_i", "> 0");
  require(finite(theta) && theta >= 0.0, "theta", ">= 0");
}

double phase_temperature(const PhaseEos& eos, double tau, double s) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::NonPositiveVolume, "tau = " + std::to_string(tau));
  }
  const double T = eos.T_ref * std::pow(eos.tau_ref / tau, eos.gamma - 1.0) *
                   std::exp((s - eos.s_ref) / eos.c_v);
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorKind::NonPositiveTemperature,
                "phase temperature " + std::to_string(T) + " at tau=" + std::to_string(tau) +
                    ", s=" + std::to_string(s));
  }
  return T;
}

PhasePotentials eval_phase(const PhaseEos& eos, double tau, double s) {
  const double T = phase_temperature(eos, tau, s);
  PhasePotentials out;
  out.T = T;
  out.e = eos.c_v * T + eos.p_inf * tau + eos.q;
  const double p_plus = (eos.gamma - 1.0) * eos.c_v * T / tau;
  out.p = p_plus - eos.p_inf;
  out.mu = out.e - T * s + out.p * tau;
  out.c2 = eos.gamma * p_plus * tau;
  out.dp_ds = (eos.gamma - 1.0) * T / tau;
  return out;
}

InterfacePotentials eval_interface(const InterfaceEos& ieos, double s_i) {
  InterfacePotentials out;
  out.T_i = ieos.T_ref_i + ieos.theta * s_i;
  if (!(out.T_i > 0.0)) {
    throw Error(ErrorKind::NonPositiveTemperature,
                "interfacial temperature " + std::to_string(out.T_i) +
                    " at s_i=" + std::to_string(s_i));
  }
  out.e_i = ieos.gamma0 + ieos.T_ref_i * s_i + 0.5 * ieos.theta * s_i * s_i;
  out.gamma_i = ieos.gamma0 - 0.5 * ieos.theta * s_i * s_i;
  return out;
}

double interface_entropy_at(const InterfaceEos& ieos, double T_i) {
  if (ieos.theta == 0.0) {
    throw Error(ErrorKind::DegenerateInterfaceEos,
                "theta = 0: T_i is constant and gamma_i(T_i) is not a function");
  }
  return (T_i - ieos.T_ref_i) / ieos.theta;
}

GibbsResiduals verify_gibbs_phase(const PhaseEos& eos, double tau, double s, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "finite-difference step must be > 0");
  }
  const PhasePotentials at = eval_phase(eos, tau, s);

  const double dtau = h * std::abs(tau);
  const double de_dtau =
      (eval_phase(eos, tau + dtau, s).e - eval_phase(eos, tau - dtau, s).e) / (2.0 * dtau);

  const double ds = h * (std::abs(s) + eos.c_v);
  const double de_ds =
      (eval_phase(eos, tau, s + ds).e - eval_phase(eos, tau, s - ds).e) / (2.0 * ds);

  return {std::abs(at.p + de_dtau) / (std::abs(at.p) + eos.p_inf + 1.0),
          std::abs(at.T - de_ds) / (std::abs(at.T) + 1.0)};
}

GibbsResiduals verify_gibbs_interface(const InterfaceEos& ieos, double s_i, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "finite-difference step must be > 0");
  }
  if (ieos.theta == 0.0) {
    throw Error(ErrorKind::DegenerateInterfaceEos,
                "theta = 0: cannot differentiate gamma_i with respect to T_i");
  }
  const InterfacePotentials at = eval_interface(ieos, s_i);

  // gamma_i as a function of T_i.
  auto tension_of_T = [&](double T) {
    return eval_interface(ieos, interface_entropy_at(ieos, T)).gamma_i;
  };
  const double dT = h * std::max(std::abs(at.T_i), 1.0);
  const double dgamma_dT = (tension_of_T(at.T_i + dT) - tension_of_T(at.T_i - dT)) / (2.0 * dT);

  const double ds = h * (std::abs(s_i) + 1.0);
  const double de_ds =
      (eval_interface(ieos, s_i + ds).e_i - eval_interface(ieos, s_i - ds).e_i) / (2.0 * ds);

  return {std::abs(dgamma_dT + s_i) / (std::abs(s_i) + 1.0), std::abs(de_ds - at.T_i) / at.T_i};
}

}  // namespace capillar
