#include "capillar/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "capillar/errors.hpp"

namespace capillar {

void ModelParams::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::InvalidParameter, msg);
  };
  require(std::isfinite(m) && m > 0.0, "m must be > 0");
  require(std::isfinite(nu) && nu > 0.0, "nu must be > 0");
  require(std::isfinite(lambda_w) && lambda_w >= 0.0, "lambda_w must be >= 0");
  require(std::isfinite(lambda_n) && lambda_n >= 0.0, "lambda_n must be >= 0");
  materials.validate();
}

double PrimCell::get(Var v) const {
  switch (v) {
    case kRho: return rho;
    case kU: return u;
    case kY: return y;
    case kAlpha: return alpha;
    case kAi: return a_i;
    case kW: return w;
    case kN: return n;
    case kS: return s;
    case kS1: return s1;
    case kS2: return s2;
    default: break;
  }
  throw Error(ErrorKind::InvalidParameter, "variable index out of range");
}

void PrimCell::set(Var v, double value) {
  switch (v) {
    case kRho: rho = value; return;
    case kU: u = value; return;
    case kY: y = value; return;
    case kAlpha: alpha = value; return;
    case kAi: a_i = value; return;
    case kW: w = value; return;
    case kN: n = value; return;
    case kS: s = value; return;
    case kS1: s1 = value; return;
    case kS2: s2 = value; return;
    default: break;
  }
  throw Error(ErrorKind::InvalidParameter, "variable index out of range");
}

namespace {

/// (m/2)(rho y w)^2 + (nu/2)(rho y n)^2
double small_scale_pressure(const PrimCell& c, const ModelParams& prm) {
  const double ry = c.rho * c.y;
  return 0.5 * prm.m * ry * ry * c.w * c.w + 0.5 * prm.nu * ry * ry * c.n * c.n;
}

}  // namespace

double p_hat(const PrimCell& cell, const ModelParams& params) {
  return eval_mixture(cell.thermo(), params.materials).p + small_scale_pressure(cell, params);
}

double quasi_pressure(const PrimCell& cell, const ModelParams& params) {
  const ComponentPotentials c = eval_components(cell.thermo(), params.materials);
  return cell.alpha * c.phase1.p + (1.0 - cell.alpha) * c.phase2.p +
         small_scale_pressure(cell, params);
}

std::array<double, kNumVars> quasi_pressure_gradient(const PrimCell& cell,
                                                     const ModelParams& params) {
  const ComponentPotentials c = eval_components(cell.thermo(), params.materials);
  const PhasePotentials& k1 = c.phase1;
  const PhasePotentials& k2 = c.phase2;
  const double rho = cell.rho;
  const double y = cell.y;
  const double kin = params.m * cell.w * cell.w + params.nu * cell.n * cell.n;

  std::array<double, kNumVars> g{};
  g[kRho] = y * k1.c2 + (1.0 - y) * k2.c2 + rho * y * y * kin;
  g[kY] = rho * (k1.c2 - k2.c2) + rho * rho * y * kin;
  g[kAlpha] = k1.p - k2.p - k1.c2 / c.view.tau1 + k2.c2 / c.view.tau2;
  g[kW] = params.m * rho * rho * y * y * cell.w;
  g[kN] = params.nu * rho * rho * y * y * cell.n;
  g[kS1] = cell.alpha * k1.dp_ds;
  g[kS2] = (1.0 - cell.alpha) * k2.dp_ds;
  return g;
}

double total_energy_density(const PrimCell& cell, const ModelParams& params) {
  const double ry = cell.rho * cell.y;
  return 0.5 * cell.rho * cell.u * cell.u + 0.5 * ry * ry * (cell.w * cell.w + cell.n * cell.n) +
         energy_density(cell.thermo(), params.materials);
}

double legendre_energy_density(const PrimCell& cell, const ModelParams& params) {
  const double dt_alpha = cell.rho * cell.y * cell.w / std::sqrt(params.m);
  const double dt_ai = cell.rho * cell.y * cell.n / std::sqrt(params.nu);
  const double K = cell.rho * cell.u;
  const double M = params.m * dt_alpha;
  const double P = params.nu * dt_ai;
  const double lagrangian = 0.5 * cell.rho * cell.u * cell.u + 0.5 * params.m * dt_alpha * dt_alpha +
                            0.5 * params.nu * dt_ai * dt_ai -
                            energy_density(cell.thermo(), params.materials);
  return cell.u * K + dt_alpha * M + dt_ai * P - lagrangian;
}

SourceRates source_terms(const PrimCell& cell, const ModelParams& params) {
  const ComponentPotentials c = eval_components(cell.thermo(), params.materials);
  const double ry = cell.rho * cell.y;
  const double sqm = std::sqrt(params.m);
  const double sqnu = std::sqrt(params.nu);
  SourceRates r;
  r.alpha = ry * cell.w / sqm;
  r.a_i = ry * cell.n / sqnu;
  r.w = (c.phase1.p - c.phase2.p) / (sqm * ry) - params.lambda_w * cell.w;
  r.n = params.sigma() * c.iface.gamma_i / (sqnu * ry) - params.lambda_n * cell.n;
  return r;
}

QuasiSystem assemble_quasilinear(const PrimCell& cell, const ModelParams& params) {
  QuasiSystem q;
  const auto grad = quasi_pressure_gradient(cell, params);
  for (int k = 0; k < kNumVars; ++k) q.C(k, k) = cell.u;
  q.C(kRho, kU) = cell.rho;
  for (int k = 0; k < kNumVars; ++k) {
    if (k == kU) continue;
    q.C(kU, k) = grad[k] / cell.rho;
  }
  const SourceRates src = source_terms(cell, params);
  q.R(kAlpha) = src.alpha;
  q.R(kAi) = src.a_i;
  q.R(kW) = src.w;
  q.R(kN) = src.n;
  return q;
}

AnalyticSpectrum acoustic_spectrum(double u, double dp_drho) {
  AnalyticSpectrum sp;
  sp.u = u;
  sp.dp_drho = dp_drho;
  sp.hyperbolic = dp_drho >= 0.0;
  sp.c_eff = sp.hyperbolic ? std::sqrt(dp_drho) : std::numeric_limits<double>::quiet_NaN();
  sp.eigenvalues.fill(u);
  sp.eigenvalues[0] = u - sp.c_eff;
  sp.eigenvalues[1] = u + sp.c_eff;
  return sp;
}

AnalyticSpectrum eigen_analytic(const PrimCell& cell, const ModelParams& params) {
  const auto grad = quasi_pressure_gradient(cell, params);
  AnalyticSpectrum sp = acoustic_spectrum(cell.u, grad[kRho]);

  const ComponentPotentials c = eval_components(cell.thermo(), params.materials);
  const double y = cell.y;
  const double inner = y * c.phase1.c2 + (1.0 - y) * c.phase2.c2 +
                       params.m * (y * cell.w) * (y * cell.w) +
                       params.nu * (y * cell.n) * (y * cell.n);
  sp.printed_formula_speed = cell.rho * std::sqrt(inner);
  sp.literal_matrix_speed = sp.hyperbolic ? std::sqrt(cell.rho * grad[kRho])
                                          : std::numeric_limits<double>::quiet_NaN();
  return sp;
}

namespace {

/// Parlett-Reinsch diagonal balancing with power-of-two scale factors.
/// Returns d such that diag(d)^-1 C diag(d) has comparable row/column norms.
Eigen::VectorXd balance(Matrix10& B) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(kNumVars);
  constexpr double radix = 2.0;
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (int i = 0; i < kNumVars; ++i) {
      double col = 0.0;
      double row = 0.0;
      for (int j = 0; j < kNumVars; ++j) {
        if (j == i) continue;
        col += std::abs(B(j, i));
        row += std::abs(B(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      double f = 1.0;
      const double sum = col + row;
      double g = row / radix;
      while (col < g) {
        f *= radix;
        col *= radix * radix;
      }
      g = row * radix;
      while (col > g) {
        f /= radix;
        col /= radix * radix;
      }
      if ((col + row) / f < 0.95 * sum) {
        converged = false;
        d(i) *= f;
        B.col(i) *= f;
        B.row(i) /= f;
      }
    }
  }
  return d;
}

}  // namespace

NumericSpectrum eigen_numeric(const Matrix10& C) {
  NumericSpectrum out;
  if (!C.allFinite()) {
    throw Error(ErrorKind::InvalidParameter, "matrix has non-finite entries");
  }
  Matrix10 B = C;
  balance(B);

  Eigen::EigenSolver<Matrix10> solver(B, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    out.converged = false;
    return out;
  }
  out.converged = true;

  const auto vals = solver.eigenvalues();
  for (int k = 0; k < kNumVars; ++k) out.eigenvalues.push_back(vals(k));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });

  const double scale = std::max(B.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  out.real_spectrum = std::all_of(out.eigenvalues.begin(), out.eigenvalues.end(),
                                  [&](const auto& z) { return std::abs(z.imag()) <= 1e-10 * scale; });

  // Eigenvectors per eigenvalue cluster, from the null space of (B - lambda I).
  // A repeated semisimple eigenvalue then contributes its whole eigenspace.
  using CMatrix = Eigen::Matrix<std::complex<double>, kNumVars, kNumVars>;
  const double cluster_tol = 1e-8 * scale;
  std::vector<Eigen::Matrix<std::complex<double>, kNumVars, 1>> basis;
  std::size_t k = 0;
  while (k < out.eigenvalues.size()) {
    std::size_t end = k + 1;
    while (end < out.eigenvalues.size() &&
           std::abs(out.eigenvalues[end] - out.eigenvalues[k]) <= cluster_tol) {
      ++end;
    }
    std::complex<double> mean = 0.0;
    for (std::size_t j = k; j < end; ++j) mean += out.eigenvalues[j];
    mean /= static_cast<double>(end - k);

    CMatrix shifted = B.cast<std::complex<double>>();
    shifted.diagonal().array() -= mean;
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double rank_tol = 1e-9 * std::max(sv(0), scale);
    // Singular values are sorted decreasingly; take the trailing (end - k)
    // vectors when they are numerically null.
    const int wanted = static_cast<int>(end - k);
    for (int j = kNumVars - wanted; j < kNumVars; ++j) {
      if (sv(j) <= rank_tol) basis.push_back(svd.matrixV().col(j));
    }
    k = end;
  }

  if (basis.size() == static_cast<std::size_t>(kNumVars)) {
    CMatrix V;
    for (int j = 0; j < kNumVars; ++j) V.col(j) = basis[j].normalized();
    Eigen::JacobiSVD<CMatrix> svd(V);
    const auto& sv = svd.singularValues();
    out.eigenvector_condition =
        sv(kNumVars - 1) > 0.0 ? sv(0) / sv(kNumVars - 1) : std::numeric_limits<double>::infinity();
  } else {
    out.eigenvector_condition = std::numeric_limits<double>::infinity();
  }
  out.complete_basis = out.eigenvector_condition < 1e12;
  return out;
}

}  // namespace capillar
