#pragma once

#include <optional>

#include "capillar/thermo.hpp"

namespace capillar {

/// The three constitutive laws of a fluid-interface system.
struct Materials {
  PhaseEos eos1;
  PhaseEos eos2;
  InterfaceEos ieos;

  void validate() const;
};

/// Fraction floors applied before any EoS evaluation. tau_k and s_i are
/// singular when a phase (or the interface) vanishes.
struct Floors {
  double eps_frac = 1e-9;
  double a_min = 1e-12;
};

/// Intensive mixture state {rho, s, s1, s2, a_i, y, alpha}. Phase 1 carries
/// (y, alpha); phase 2 carries the complements.
struct MixtureState {
  double rho = 1.0;
  double s = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double a_i = 1.0;
  double y = 0.5;
  double alpha = 0.5;
};

/// Throws Error(InvalidState) when a field is non-finite or outside its floor.
void validate(const MixtureState& state, const Floors& floors = {});

/// Clamps y, alpha into [eps, 1-eps] and a_i to >= a_min. Returns how many
/// fields were moved.
int clamp_to_floors(MixtureState& state, const Floors& floors = {});

/// s_i = rho (s - y s1 - (1-y) s2) / a_i.
double interfacial_entropy(const MixtureState& state);

/// Mixture entropy reconstructed from phasic and interfacial entropies.
double mixture_entropy(double rho, double y, double s1, double s2, double a_i, double s_i);

struct PhasicView {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double s_i = 0.0;
};

PhasicView phasic_view(const MixtureState& state);

struct EntropyFractions {
  double z1 = 0.0;
  double z2 = 0.0;
  double z_i = 0.0;
};

/// Throws Error(ZeroMixtureEntropy) when s == 0.
EntropyFractions entropy_fractions(const MixtureState& state);

/// Everything the mixture relations are assembled from.
struct ComponentPotentials {
  PhasicView view;
  PhasePotentials phase1;
  PhasePotentials phase2;
  InterfacePotentials iface;
};

ComponentPotentials eval_components(const MixtureState& state, const Materials& mat);

struct MixturePotentials {
  double e = 0.0;             // J/kg
  std::optional<double> T;    // empty when s == 0
  double p = 0.0;             // alpha p1 + (1-alpha) p2 - a_i gamma_i
  double mu = 0.0;            // y mu1 + (1-y) mu2
  double omega = 0.0;         // grand potential per unit volume
};

/// omega is assembled from the Legendre-transform terms of
/// grand_potential_terms, independently of the pressure path.
MixturePotentials eval_mixture(const MixtureState& state, const Materials& mat);

/// Mixture specific energy e(B~).
double mixture_energy(const MixtureState& state, const Materials& mat);

/// Volumic energy rho e(B~), the potential part of the Lagrangian.
double energy_density(const MixtureState& state, const Materials& mat);

struct GrandPotentialTerms {
  double omega1 = 0.0;   // (e1 - T1 s1 - mu1) / tau1
  double omega2 = 0.0;
  double omega_i = 0.0;  // e_i - T_i s_i
};

GrandPotentialTerms grand_potential_terms(const MixtureState& state, const Materials& mat);

/// Partials of rho e at fixed {rho, s, s1, s2, y}:
///   d/d alpha = -(p1 - p2),   d/d a_i = +gamma_i.
struct EnergyPartials {
  double d_alpha = 0.0;
  double d_ai = 0.0;
};

EnergyPartials d_energy_d_alpha_ai(const MixtureState& state, const Materials& mat);

/// Relabels phase 1 <-> phase 2 (state and materials together).
MixtureState swap_phases(const MixtureState& state);
Materials swap_phases(const Materials& mat);

}  // namespace capillar
