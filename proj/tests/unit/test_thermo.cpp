#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "capillar/errors.hpp"
#include "capillar/thermo.hpp"

using namespace capillar;

namespace {

PhaseEos ideal_gas() {
  PhaseEos e;
  e.gamma = 1.4;
  e.c_v = 718.0;
  e.tau_ref = 0.8;
  e.T_ref = 300.0;
  return e;
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

TEST_CASE("ideal gas at its reference state") {
  const PhasePotentials k = eval_phase(ideal_gas(), 0.8, 0.0);
  CHECK(k.T == doctest::Approx(300.0).epsilon(1e-15));
  CHECK(k.p == doctest::Approx(107700.0).epsilon(1e-14));
  CHECK(k.e == doctest::Approx(215400.0).epsilon(1e-14));
  // mu = e - T s + p tau and c^2 = gamma (p + p_inf) tau, evaluated by hand.
  CHECK(k.mu == doctest::Approx(215400.0 + 107700.0 * 0.8).epsilon(1e-14));
  CHECK(k.c2 == doctest::Approx(1.4 * 107700.0 * 0.8).epsilon(1e-14));
  CHECK(k.dp_ds == doctest::Approx(0.4 * 300.0 / 0.8).epsilon(1e-14));
}

TEST_CASE("reference state returns T_ref exactly") {
  for (const PhaseEos& e : {ideal_gas(), fixtures::liquid(), fixtures::helium()}) {
    CHECK(phase_temperature(e, e.tau_ref, e.s_ref) == e.T_ref);
  }
}

TEST_CASE("potentials satisfy mu identity and sound speed sign") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const PhaseEos& e : {ideal_gas(), fixtures::liquid()}) {
    for (int k = 0; k < 200; ++k) {
      const double tau = e.tau_ref * std::exp(std::log(4.0) * (U(rng) - 0.5));
      const double s = e.s_ref + e.c_v * (2.0 * U(rng) - 1.0);
      const PhasePotentials p = eval_phase(e, tau, s);
      const double scale = std::abs(p.e) + std::abs(p.T * s) + std::abs(p.p * tau);
      CHECK(std::abs(p.mu - (p.e - p.T * s + p.p * tau)) <= 4e-16 * scale);
      CHECK(p.T > 0.0);
      CHECK(p.p + e.p_inf > 0.0);
      CHECK(p.c2 > 0.0);
    }
  }
}

TEST_CASE("phase EoS error paths") {
  CHECK(kind_of([] { eval_phase(ideal_gas(), 0.0, 0.0); }) == ErrorKind::NonPositiveVolume);
  CHECK(kind_of([] { eval_phase(ideal_gas(), -1.0, 0.0); }) == ErrorKind::NonPositiveVolume);
  // exp underflow drives T to zero.
  CHECK(kind_of([] { eval_phase(ideal_gas(), 0.8, -1e6); }) == ErrorKind::NonPositiveTemperature);
  PhaseEos bad = ideal_gas();
  bad.gamma = 1.0;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::InvalidParameter);
  bad = ideal_gas();
  bad.c_v = 0.0;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::InvalidParameter);
  bad = ideal_gas();
  bad.p_inf = -1.0;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("phasic Gibbs residuals on a 10x10 log-spaced grid") {
  for (const PhaseEos& e : {ideal_gas(), fixtures::liquid(), fixtures::helium()}) {
    double worst = 0.0;
    for (int a = 0; a < 10; ++a) {
      const double tau = e.tau_ref * std::pow(4.0, a / 9.0 - 0.5);
      for (int b = 0; b < 10; ++b) {
        const double s = e.s_ref + e.c_v * (-1.0 + 2.0 * b / 9.0);
        const GibbsResiduals r = verify_gibbs_phase(e, tau, s, 1e-6);
        worst = std::max({worst, r.first, r.second});
      }
    }
    CHECK(worst < 1e-6);
  }
  const GibbsResiduals r = verify_gibbs_phase(ideal_gas(), 0.8, 0.0, 1e-7);
  CHECK(r.first < 1e-6);
  CHECK(r.second < 1e-6);
}

TEST_CASE("central-difference residual shrinks quadratically with h") {
  const PhaseEos e = ideal_gas();
  const double r3 = verify_gibbs_phase(e, 0.5, 300.0, 1e-3).first;
  const double r4 = verify_gibbs_phase(e, 0.5, 300.0, 1e-4).first;
  // A second-order stencil gives a factor 100 per decade of h.
  CHECK(r3 / r4 == doctest::Approx(100.0).epsilon(0.05));
  const double t3 = verify_gibbs_phase(e, 0.5, 300.0, 1e-3).second;
  const double t4 = verify_gibbs_phase(e, 0.5, 300.0, 1e-4).second;
  CHECK(t3 / t4 == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("interface at zero entropy") {
  const InterfaceEos ie = fixtures::water_air_interface();
  const InterfacePotentials p = eval_interface(ie, 0.0);
  CHECK(p.e_i == ie.gamma0);
  CHECK(p.T_i == ie.T_ref_i);
  CHECK(p.gamma_i == ie.gamma0);
  CHECK_FALSE(p.negative_tension());
}

TEST_CASE("interface closed form at s_i = 10") {
  InterfaceEos ie;
  ie.gamma0 = 0.072;
  ie.T_ref_i = 373.0;
  ie.theta = 1e-4;
  const InterfacePotentials p = eval_interface(ie, 10.0);
  CHECK(p.T_i == doctest::Approx(373.001).epsilon(1e-15));
  CHECK(p.gamma_i == doctest::Approx(0.067).epsilon(1e-12));
  CHECK(p.e_i == doctest::Approx(3730.077).epsilon(1e-15));
}

TEST_CASE("interfacial Euler identity holds to round-off") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  const InterfaceEos ie = fixtures::water_air_interface();
  for (int k = 0; k < 100; ++k) {
    const double s_i = U(rng);
    const InterfacePotentials p = eval_interface(ie, s_i);
    CHECK(std::abs(p.e_i - p.T_i * s_i - p.gamma_i) <= 1e-15 * (std::abs(p.e_i) + std::abs(p.T_i * s_i)));
  }
}

TEST_CASE("interface error and warning paths") {
  InterfaceEos ie = fixtures::water_air_interface();
  CHECK(kind_of([&] { eval_interface(ie, -400.0); }) == ErrorKind::NonPositiveTemperature);
  CHECK(eval_interface(ie, 1.0).negative_tension());
  ie.theta = 0.0;
  CHECK(kind_of([&] { verify_gibbs_interface(ie, 0.0); }) == ErrorKind::DegenerateInterfaceEos);
  CHECK(kind_of([&] { interface_entropy_at(ie, 300.0); }) == ErrorKind::DegenerateInterfaceEos);
  ie = fixtures::water_air_interface();
  ie.theta = -1.0;
  CHECK(kind_of([&] { ie.validate(); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("Gibbs-Duhem for the quadratic interface") {
  const InterfaceEos ie = fixtures::water_air_interface();
  for (double s_i : {-5.0, 0.0, 5.0}) {
    const GibbsResiduals r = verify_gibbs_interface(ie, s_i, 1e-6);
    CHECK(r.first < 1e-8);
    CHECK(r.second < 1e-8);
  }
  // gamma_i is stationary in T_i at zero entropy.
  auto gamma_of_T = [&](double T) { return eval_interface(ie, interface_entropy_at(ie, T)).gamma_i; };
  CHECK(std::abs(gamma_of_T(300.0 + 1e-3) - gamma_of_T(300.0 - 1e-3)) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const GibbsResiduals r = verify_gibbs_interface(ie, U(rng), 1e-6);
    worst = std::max({worst, r.first, r.second});
  }
  CHECK(worst < 1e-6);
}
