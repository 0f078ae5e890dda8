#pragma once

// Closed-form equations of state for the two bulk phases and the massless
// interface, in intensive (specific) variables.

namespace capillar {

/// Stiffened gas written in entropic variables (tau, s):
///
///   T(tau, s) = T_ref (tau_ref / tau)^(gamma-1) exp((s - s_ref) / c_v)
///   e(tau, s) = c_v T + p_inf tau + q
///   p(tau, s) = (gamma-1) c_v T / tau - p_inf
///
/// so that de = T ds - p dtau holds identically.
struct PhaseEos {
  double gamma = 1.4;    // adiabatic exponent, > 1
  double c_v = 718.0;    // J/(kg K), > 0
  double p_inf = 0.0;    // Pa, >= 0
  double q = 0.0;        // J/kg
  double tau_ref = 1.0;  // m^3/kg, > 0
  double T_ref = 300.0;  // K, > 0
  double s_ref = 0.0;    // J/(kg K)

  /// Throws Error(InvalidParameter) naming the offending field.
  void validate() const;
};

struct PhasePotentials {
  double e = 0.0;   // specific internal energy
  double p = 0.0;   // pressure
  double T = 0.0;   // temperature
  double mu = 0.0;  // chemical potential, e - T s + p tau
  double c2 = 0.0;  // squared sound speed, -tau^2 dp/dtau at fixed s
  double dp_ds = 0.0;  // dp/ds at fixed tau
};

PhasePotentials eval_phase(const PhaseEos& eos, double tau, double s);

/// Temperature only; cheaper than eval_phase when that is all a caller needs.
double phase_temperature(const PhaseEos& eos, double tau, double s);

/// Quadratic interfacial energy per unit area,
///   e_i(s_i) = gamma0 + T_ref_i s_i + (theta/2) s_i^2,
/// giving T_i = T_ref_i + theta s_i and gamma_i = gamma0 - (theta/2) s_i^2.
struct InterfaceEos {
  double gamma0 = 0.072;   // N/m, surface tension at zero interfacial entropy
  double T_ref_i = 300.0;  // K
  double theta = 1.0;      // K m^2 / J; theta = 0 is accepted but degenerate

  void validate() const;
};

struct InterfacePotentials {
  double e_i = 0.0;
  double T_i = 0.0;
  double gamma_i = 0.0;

  /// Warning-level condition: the state lies outside gamma_i >= 0.
  bool negative_tension() const noexcept { return gamma_i < 0.0; }
};

InterfacePotentials eval_interface(const InterfaceEos& ieos, double s_i);

/// Interfacial entropy per area at which T_i equals the given temperature.
/// Throws DegenerateInterfaceEos when theta == 0.
double interface_entropy_at(const InterfaceEos& ieos, double T_i);

/// Normalised residuals of a finite-difference Gibbs check. Both entries are
/// dimensionless.
struct GibbsResiduals {
  double first = 0.0;
  double second = 0.0;
};

inline constexpr double kDefaultGibbsStep = 1e-6;

/// Central-difference check of de = T ds - p dtau.
///   first  = |p + de/dtau| / (|p| + p_inf + 1), step h |tau|
///   second = |T - de/ds|   / (|T| + 1), step h (|s| + c_v)
GibbsResiduals verify_gibbs_phase(const PhaseEos& eos, double tau, double s,
                                  double h = kDefaultGibbsStep);

/// Gibbs-Duhem check for the interface.
///   first  = |d gamma_i / d T_i + s_i| / (|s_i| + 1), differentiating through
///            T_i -> s_i = (T_i - T_ref_i)/theta -> gamma_i
///   second = |e_i'(s_i) - T_i| / T_i
GibbsResiduals verify_gibbs_interface(const InterfaceEos& ieos, double s_i,
                                      double h = kDefaultGibbsStep);

}  // namespace capillar
