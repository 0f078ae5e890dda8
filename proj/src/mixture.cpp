#include "capillar/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "capillar/errors.hpp"

namespace capillar {

void Materials::validate() const {
  eos1.validate();
  eos2.validate();
  ieos.validate();
}

namespace {

void require_state(bool ok, const char* what, double value) {
  if (!ok) {
    throw Error(ErrorKind::InvalidState, std::string(what) + " (got " + std::to_string(value) + ")");
  }
}

}  // namespace

void validate(const MixtureState& st, const Floors& floors) {
  require_state(std::isfinite(st.rho) && st.rho > 0.0, "rho must be > 0", st.rho);
  require_state(std::isfinite(st.s), "s must be finite", st.s);
  require_state(std::isfinite(st.s1), "s1 must be finite", st.s1);
  require_state(std::isfinite(st.s2), "s2 must be finite", st.s2);
  require_state(std::isfinite(st.y) && st.y >= floors.eps_frac && st.y <= 1.0 - floors.eps_frac,
                "y must lie in [eps_frac, 1-eps_frac]", st.y);
  require_state(std::isfinite(st.alpha) && st.alpha >= floors.eps_frac &&
                    st.alpha <= 1.0 - floors.eps_frac,
                "alpha must lie in [eps_frac, 1-eps_frac]", st.alpha);
  require_state(std::isfinite(st.a_i) && st.a_i >= floors.a_min, "a_i must be >= a_min", st.a_i);
}

int clamp_to_floors(MixtureState& st, const Floors& floors) {
  int moved = 0;
  auto clamp = [&](double& v, double lo, double hi) {
    const double c = std::clamp(v, lo, hi);
    if (c != v) {
      v = c;
      ++moved;
    }
  };
  clamp(st.y, floors.eps_frac, 1.0 - floors.eps_frac);
  clamp(st.alpha, floors.eps_frac, 1.0 - floors.eps_frac);
  if (st.a_i < floors.a_min) {
    st.a_i = floors.a_min;
    ++moved;
  }
  return moved;
}

double interfacial_entropy(const MixtureState& st) {
  return (st.s - st.y * st.s1 - (1.0 - st.y) * st.s2) * st.rho / st.a_i;
}

double mixture_entropy(double rho, double y, double s1, double s2, double a_i, double s_i) {
  return y * s1 + (1.0 - y) * s2 + a_i * s_i / rho;
}

PhasicView phasic_view(const MixtureState& st) {
  return {st.alpha / (st.y * st.rho), (1.0 - st.alpha) / ((1.0 - st.y) * st.rho),
          interfacial_entropy(st)};
}

EntropyFractions entropy_fractions(const MixtureState& st) {
  if (st.s == 0.0) {
    throw Error(ErrorKind::ZeroMixtureEntropy, "entropy fractions are undefined at s = 0");
  }
  const double s_i = interfacial_entropy(st);
  return {st.y * st.s1 / st.s, (1.0 - st.y) * st.s2 / st.s, st.a_i * s_i / (st.rho * st.s)};
}

ComponentPotentials eval_components(const MixtureState& st, const Materials& mat) {
  // Open-domain check only; floors are the caller's policy.
  validate(st, Floors{0.0, 0.0});
  if (st.y == 0.0 || st.y == 1.0 || st.alpha == 0.0 || st.alpha == 1.0 || st.a_i == 0.0) {
    throw Error(ErrorKind::InvalidState, "vanishing phase or interface");
  }
  ComponentPotentials c;
  c.view = phasic_view(st);
  c.phase1 = eval_phase(mat.eos1, c.view.tau1, st.s1);
  c.phase2 = eval_phase(mat.eos2, c.view.tau2, st.s2);
  c.iface = eval_interface(mat.ieos, c.view.s_i);
  return c;
}

namespace {

double energy_from(const MixtureState& st, const ComponentPotentials& c) {
  return st.y * c.phase1.e + (1.0 - st.y) * c.phase2.e + st.a_i / st.rho * c.iface.e_i;
}

GrandPotentialTerms grand_from(const MixtureState& st, const ComponentPotentials& c) {
  GrandPotentialTerms g;
  g.omega1 = (c.phase1.e - c.phase1.T * st.s1 - c.phase1.mu) / c.view.tau1;
  g.omega2 = (c.phase2.e - c.phase2.T * st.s2 - c.phase2.mu) / c.view.tau2;
  g.omega_i = c.iface.e_i - c.iface.T_i * c.view.s_i;
  return g;
}

}  // namespace

MixturePotentials eval_mixture(const MixtureState& st, const Materials& mat) {
  const ComponentPotentials c = eval_components(st, mat);
  MixturePotentials out;
  out.e = energy_from(st, c);
  out.p = st.alpha * c.phase1.p + (1.0 - st.alpha) * c.phase2.p - st.a_i * c.iface.gamma_i;
  out.mu = st.y * c.phase1.mu + (1.0 - st.y) * c.phase2.mu;
  const GrandPotentialTerms g = grand_from(st, c);
  out.omega = st.alpha * g.omega1 + (1.0 - st.alpha) * g.omega2 + st.a_i * g.omega_i;
  if (st.s != 0.0) {
    const EntropyFractions z = entropy_fractions(st);
    out.T = z.z1 * c.phase1.T + z.z2 * c.phase2.T + z.z_i * c.iface.T_i;
  }
  return out;
}

double mixture_energy(const MixtureState& st, const Materials& mat) {
  return energy_from(st, eval_components(st, mat));
}

double energy_density(const MixtureState& st, const Materials& mat) {
  return st.rho * mixture_energy(st, mat);
}

GrandPotentialTerms grand_potential_terms(const MixtureState& st, const Materials& mat) {
  return grand_from(st, eval_components(st, mat));
}

EnergyPartials d_energy_d_alpha_ai(const MixtureState& st, const Materials& mat) {
  const ComponentPotentials c = eval_components(st, mat);
  return {-(c.phase1.p - c.phase2.p), c.iface.gamma_i};
}

MixtureState swap_phases(const MixtureState& st) {
  MixtureState out = st;
  out.y = 1.0 - st.y;
  out.alpha = 1.0 - st.alpha;
  out.s1 = st.s2;
  out.s2 = st.s1;
  return out;
}

Materials swap_phases(const Materials& mat) { return {mat.eos2, mat.eos1, mat.ieos}; }

}  // namespace capillar
