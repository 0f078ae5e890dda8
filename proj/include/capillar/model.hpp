#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "capillar/mixture.hpp"

namespace capillar {

/// Sign applied to the surface-tension source of the n equation.
///   lagrangian: dn/dt = +gamma_i / (sqrt(nu) rho y)
///   derived: dn/dt = -gamma_i / (sqrt(nu) rho y), the sign obtained by
///            differentiating rho e with respect to a_i; it makes the
///            source step conserve the total energy.
enum class SourceSign { lagrangian, derived };

struct ModelParams {
  double m = 1.0;   // kg/m, inertia attached to D_t alpha
  double nu = 1.0;  // kg m, inertia attached to D_t a_i
  Materials materials;
  double lambda_w = 0.0;  // 1/s
  double lambda_n = 0.0;  // 1/s
  SourceSign source_sign = SourceSign::lagrangian;

  void validate() const;
  double sigma() const noexcept { return source_sign == SourceSign::lagrangian ? 1.0 : -1.0; }
};

/// Variable ordering shared by PrimCell, QuasiSystem and the solver.
enum Var : int { kRho = 0, kU, kY, kAlpha, kAi, kW, kN, kS, kS1, kS2, kNumVars };

inline constexpr std::array<const char*, kNumVars> kVarNames{"rho", "u",  "y", "alpha", "a_i",
                                                             "w",   "n",  "s", "s1",    "s2"};

/// Full dynamic state of one cell. w and n are the small-scale momentum
/// variables: D_t alpha = rho y w / sqrt(m), D_t a_i = rho y n / sqrt(nu).
struct PrimCell {
  double rho = 1.0;
  double u = 0.0;
  double y = 0.5;
  double alpha = 0.5;
  double a_i = 1.0;
  double w = 0.0;
  double n = 0.0;
  double s = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  MixtureState thermo() const { return {rho, s, s1, s2, a_i, y, alpha}; }
  double get(Var v) const;
  void set(Var v, double value);
};

/// Momentum-flux pressure p + (m/2)(rho y w)^2 + (nu/2)(rho y n)^2 with the
/// fluid-interface pressure p = alpha p1 + (1-alpha) p2 - a_i gamma_i.
double p_hat(const PrimCell& cell, const ModelParams& params);

/// Pressure used in the quasilinear analysis: as p_hat but without the
/// -a_i gamma_i term.
double quasi_pressure(const PrimCell& cell, const ModelParams& params);

/// Analytic gradient of quasi_pressure in the variable ordering of Var.
/// Entries for u and s are zero.
std::array<double, kNumVars> quasi_pressure_gradient(const PrimCell& cell, const ModelParams& params);

/// E = rho u^2/2 + (rho y w)^2/2 + (rho y n)^2/2 + rho e.
double total_energy_density(const PrimCell& cell, const ModelParams& params);

/// Same quantity through the partial Legendre transform of the Lagrangian,
/// u K + D_t alpha M + D_t a_i P - L.
double legendre_energy_density(const PrimCell& cell, const ModelParams& params);

struct SourceRates {
  double alpha = 0.0;
  double a_i = 0.0;
  double w = 0.0;
  double n = 0.0;
};

SourceRates source_terms(const PrimCell& cell, const ModelParams& params);

using Matrix10 = Eigen::Matrix<double, kNumVars, kNumVars>;
using Vector10 = Eigen::Matrix<double, kNumVars, 1>;

/// d_t V + C(V) d_x V = R(V) for V = (rho, u, y, alpha, a_i, w, n, s, s1, s2).
struct QuasiSystem {
  Matrix10 C = Matrix10::Zero();
  Vector10 R = Vector10::Zero();
};

QuasiSystem assemble_quasilinear(const PrimCell& cell, const ModelParams& params);

struct AnalyticSpectrum {
  double u = 0.0;
  double dp_drho = 0.0;  // d quasi_pressure / d rho at fixed (y, alpha, a_i, w, n, s, s1, s2)
  double c_eff = 0.0;    // sqrt(dp_drho); NaN when not hyperbolic
  bool hyperbolic = true;
  std::array<double, kNumVars> eigenvalues{};  // u - c_eff, u + c_eff, then u x 8

  // Alternative acoustic speeds, for side-by-side reporting only.
  double printed_formula_speed = 0.0;  // rho sqrt(y c1^2 + (1-y) c2^2 + m (y w)^2 + nu (y n)^2)
  double literal_matrix_speed = 0.0;   // sqrt(rho dp_drho): row-2/col-1 entry read without 1/rho
};

/// Exact spectrum of the assembled block-triangular C. Sets hyperbolic =
/// false (ComplexEigenvalues) when dp_drho < 0.
AnalyticSpectrum eigen_analytic(const PrimCell& cell, const ModelParams& params);

/// Acoustic block only; exposed so the loss-of-hyperbolicity path can be
/// exercised with an arbitrary dp/drho.
AnalyticSpectrum acoustic_spectrum(double u, double dp_drho);

struct NumericSpectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (real, imag)
  double eigenvector_condition = 0.0;             // 2-norm condition of the eigenvector matrix
  bool complete_basis = false;                    // condition < 1e12
  bool real_spectrum = false;
  bool converged = false;
};

/// Dense general eigensolver (Eigen) after diagonal balancing. A
/// convergence failure is reported through `converged`, never thrown.
NumericSpectrum eigen_numeric(const Matrix10& C);

}  // namespace capillar
