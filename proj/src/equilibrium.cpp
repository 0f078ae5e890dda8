#include "capillar/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "capillar/errors.hpp"

namespace capillar {

void GeometricClosure::validate() const {
  if (kind == ClosureKind::spherical && !(std::isfinite(n_b) && n_b > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "n_b must be > 0 for a spherical closure");
  }
}

double GeometricClosure::area(double alpha) const {
  return std::cbrt(36.0 * std::numbers::pi * n_b) * std::pow(alpha, 2.0 / 3.0);
}

double GeometricClosure::slope(double alpha, double a_i) const {
  return kind == ClosureKind::spherical ? (2.0 / 3.0) * a_i / alpha : 0.0;
}

void EquilibriumProblem::validate() const {
  if (!(std::isfinite(tau) && tau > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "tau must be > 0");
  }
  if (!std::isfinite(s)) throw Error(ErrorKind::InvalidParameter, "s must be finite");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tol must be > 0");
  if (max_iter < 1) throw Error(ErrorKind::InvalidParameter, "max_iter must be >= 1");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::InvalidParameter, "fd_step must be > 0");
  if (mode == EquilibriumMode::frozen_y && !(y > 0.0 && y < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "y must lie in (0,1) in frozen_y mode");
  }
  closure.validate();
}

std::vector<double> EquilibriumResidual::values() const {
  std::vector<double> v{thermal_12, thermal_1i};
  if (chemical) v.push_back(*chemical);
  v.push_back(mechanical);
  return v;
}

double EquilibriumResidual::norm() const {
  double n = 0.0;
  for (double v : values()) n = std::max(n, std::abs(v));
  return n;
}

EquilibriumResidual equilibrium_residual(const MixtureState& st, const GeometricClosure& closure,
                                         const Materials& mat, EquilibriumMode mode) {
  if (closure.kind == ClosureKind::spherical) {
    const double expected = closure.area(st.alpha);
    if (std::abs(expected - st.a_i) > 1e-10 * expected) {
      throw Error(ErrorKind::ClosureInconsistent,
                  "a_i = " + std::to_string(st.a_i) + " but the spherical closure gives " +
                      std::to_string(expected));
    }
  }
  const ComponentPotentials c = eval_components(st, mat);
  const PhasePotentials& k1 = c.phase1;
  const PhasePotentials& k2 = c.phase2;

  const double T_bar = std::max({k1.T, k2.T, c.iface.T_i});
  const double p_bar = std::max({std::abs(k1.p), std::abs(k2.p), mat.eos1.p_inf, mat.eos2.p_inf, 1.0});
  const double mu_bar =
      std::max({std::abs(k1.mu), std::abs(k2.mu), std::abs(k1.e), std::abs(k2.e), 1.0});

  EquilibriumResidual r;
  r.thermal_12 = (k1.T - k2.T) / T_bar;
  r.thermal_1i = (k1.T - c.iface.T_i) / T_bar;
  if (mode == EquilibriumMode::full) r.chemical = (k1.mu - k2.mu) / mu_bar;
  r.mechanical = (k1.p - k2.p - c.iface.gamma_i * closure.slope(st.alpha, st.a_i)) / p_bar;
  return r;
}

double young_laplace_radius(const MixtureState& st) { return 3.0 * st.alpha / st.a_i; }

namespace {

using Vec = Eigen::VectorXd;

class EquilibriumSystem {
public:
  EquilibriumSystem(const EquilibriumProblem& pb, const MixtureState& guess, const Materials& mat,
                    const Floors& floors)
      : pb_(pb), mat_(mat), floors_(floors), planar_area_(guess.a_i) {}

  bool full() const { return pb_.mode == EquilibriumMode::full; }
  int size() const { return full() ? 4 : 3; }

  Vec unknowns_from(const MixtureState& guess) const {
    Vec x(size());
    int k = 0;
    if (full()) x(k++) = guess.y;
    x(k++) = guess.alpha;
    x(k++) = guess.s1;
    x(k++) = interfacial_entropy(guess);
    return x;
  }

  MixtureState state_of(const Vec& x) const {
    MixtureState st;
    int k = 0;
    st.rho = 1.0 / pb_.tau;
    st.s = pb_.s;
    st.y = full() ? x(k++) : pb_.y;
    st.alpha = x(k++);
    st.s1 = x(k++);
    const double s_i = x(k++);
    st.a_i = pb_.closure.kind == ClosureKind::spherical ? pb_.closure.area(st.alpha) : planar_area_;
    st.s2 = (st.s - st.y * st.s1 - st.a_i * s_i / st.rho) / (1.0 - st.y);
    return st;
  }

  /// Empty when x lies outside the admissible region.
  std::optional<Vec> residual(const Vec& x) const {
    for (int k = 0; k < size(); ++k) {
      if (!std::isfinite(x(k))) return std::nullopt;
    }
    const MixtureState st = state_of(x);
    const double lo = floors_.eps_frac;
    const double hi = 1.0 - floors_.eps_frac;
    if (st.y < lo || st.y > hi || st.alpha < lo || st.alpha > hi || st.a_i < floors_.a_min) {
      return std::nullopt;
    }
    try {
      if (eval_interface(mat_.ieos, interfacial_entropy(st)).negative_tension()) return std::nullopt;
      const std::vector<double> v = equilibrium_residual(st, pb_.closure, mat_, pb_.mode).values();
      return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  double typical(int k) const {
    const int shift = full() ? 0 : 1;
    switch (k + shift) {
      case 0:
      case 1: return 1.0;
      case 2: return mat_.eos1.c_v;
      default: {
        const double span = mat_.ieos.theta > 0.0 ? std::sqrt(2.0 * mat_.ieos.gamma0 / mat_.ieos.theta) : 0.0;
        return span > 0.0 ? span : 1.0;
      }
    }
  }

  Eigen::MatrixXd jacobian(const Vec& x) const {
    const int n = size();
    Eigen::MatrixXd J(n, n);
    for (int k = 0; k < n; ++k) {
      const double h = pb_.fd_step * std::max(std::abs(x(k)), typical(k));
      Vec xp = x;
      Vec xm = x;
      xp(k) += h;
      xm(k) -= h;
      auto fp = residual(xp);
      auto fm = residual(xm);
      if (fp && fm) {
        J.col(k) = (*fp - *fm) / (2.0 * h);
      } else {
        // One-sided near the boundary of the admissible region.
        auto f0 = residual(x);
        if (fp && f0) {
          J.col(k) = (*fp - *f0) / h;
        } else if (fm && f0) {
          J.col(k) = (*f0 - *fm) / h;
        } else {
          throw Error(ErrorKind::InfeasibleRegion, "Jacobian stencil leaves the admissible region");
        }
      }
    }
    return J;
  }

private:
  const EquilibriumProblem& pb_;
  const Materials& mat_;
  const Floors& floors_;
  double planar_area_;
};

}  // namespace

EquilibriumSolution solve_equilibrium(const EquilibriumProblem& pb, const MixtureState& guess,
                                      const Materials& mat, const Floors& floors) {
  pb.validate();
  mat.validate();
  if (pb.closure.kind == ClosureKind::planar && !(guess.a_i > 0.0)) {
    throw Error(ErrorKind::InvalidState, "planar closure takes a_i from the guess; it must be > 0");
  }

  EquilibriumSystem sys(pb, guess, mat, floors);
  Vec x = sys.unknowns_from(guess);
  std::optional<Vec> f = sys.residual(x);
  if (!f) {
    throw Error(ErrorKind::InfeasibleRegion, "initial guess lies outside the admissible region");
  }

  int iter = 0;
  while (f->lpNorm<Eigen::Infinity>() > pb.tol) {
    if (iter >= pb.max_iter) {
      throw Error(ErrorKind::MaxIterExceeded,
                  "no convergence after " + std::to_string(iter) + " iterations (residual " +
                      std::to_string(f->lpNorm<Eigen::Infinity>()) + ")");
    }
    const Eigen::MatrixXd J = sys.jacobian(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
      throw Error(ErrorKind::SingularJacobian,
                  "Jacobian is singular at iteration " + std::to_string(iter) + "; try another guess");
    }
    const Vec step = lu.solve(-*f);

    const double f_norm = f->norm();
    bool accepted = false;
    bool hit_boundary = false;
    double lambda = 1.0;
    for (int h = 0; h <= pb.max_halvings; ++h, lambda *= 0.5) {
      const Vec trial = x + lambda * step;
      auto ft = sys.residual(trial);
      if (!ft) {
        hit_boundary = true;
        continue;
      }
      if (ft->norm() < f_norm) {
        x = trial;
        f = std::move(ft);
        accepted = true;
        break;
      }
    }
    ++iter;
    if (!accepted) {
      if (hit_boundary) {
        throw Error(ErrorKind::InfeasibleRegion,
                    "Newton iterates hit the fraction floors or negative surface tension");
      }
      throw Error(ErrorKind::MaxIterExceeded, "line search stalled at iteration " + std::to_string(iter));
    }
  }

  EquilibriumSolution sol;
  sol.state = sys.state_of(x);
  sol.report = equilibrium_residual(sol.state, pb.closure, mat, pb.mode);
  sol.residual_norm = sol.report.norm();
  sol.iterations = iter;
  return sol;
}

}  // namespace capillar
