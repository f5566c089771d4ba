#pragma once

// Two-parameter Gibbs states ρ ∝ exp(−β₁H − β₂Q²), their costs, and the
// diagnostics built around them (stationarity, parity symmetrization, the
// relative-entropy identity and its Jensen lower bound).

#include <cmath>
#include <limits>

#include "entrobound/discrete_qm.hpp"
#include "entrobound/matfun.hpp"

namespace entrobound {

/// Entropy and costs of a Gibbs state, computed from the spectrum of the
/// exponent without assembling ρ.
struct GibbsCosts {
  double entropy = 0.0;
  double energy_cost = 0.0;
  double space_cost = 0.0;
  double product = 0.0;
};

namespace detail {

struct GibbsSpectrum {
  VectorXd probabilities;
  VectorXd log_probabilities;
  MatrixXr vectors;
};

inline GibbsSpectrum gibbs_spectrum(const QSystem& sys, double beta1, double beta2) {
  const MatrixXr exponent =
      -beta1 * sys.hamiltonian().matrix() - MatrixXr((beta2 * sys.grid_squared()).asDiagonal());
  Eigen::SelfAdjointEigenSolver<MatrixXr> solver(exponent, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("gibbs_state: eigensolver did not converge");
  const VectorXd& lam = solver.eigenvalues();
  // Shift by the largest exponent eigenvalue; Z is invariant up to the shift.
  const VectorXd shifted = lam.array() - lam.maxCoeff();
  const double log_z = std::log(shifted.array().exp().sum());
  GibbsSpectrum out{VectorXd(), shifted.array() - log_z, solver.eigenvectors()};
  out.probabilities = out.log_probabilities.array().exp();
  if (!out.probabilities.allFinite() || !std::isfinite(log_z))
    throw NumericError("gibbs_state: non-finite intermediate");
  return out;
}

inline GibbsCosts costs_from_spectrum(const QSystem& sys, const GibbsSpectrum& g) {
  GibbsCosts c;
  const MatrixXr hu = sys.hamiltonian().matrix() * g.vectors;
  for (Index i = 0; i < g.probabilities.size(); ++i) {
    const double p = g.probabilities(i);
    if (p > 0.0) c.entropy -= p * g.log_probabilities(i);
    c.energy_cost += p * g.vectors.col(i).dot(hu.col(i));
    c.space_cost += p * g.vectors.col(i).cwiseAbs2().dot(sys.grid_squared());
  }
  c.entropy = std::clamp(c.entropy, 0.0, std::log(static_cast<double>(sys.dim())));
  c.product = c.energy_cost * c.space_cost;
  if (!std::isfinite(c.product)) throw NumericError("gibbs_state: non-finite cost");
  return c;
}

}  // namespace detail

inline GibbsCosts gibbs_costs(const QSystem& sys, double beta1, double beta2) {
  return detail::costs_from_spectrum(sys, detail::gibbs_spectrum(sys, beta1, beta2));
}

struct GibbsState {
  double beta1 = 0.0;
  double beta2 = 0.0;
  DensityMatrix<double> rho;
  double entropy = 0.0;
  double energy_cost = 0.0;
  double space_cost = 0.0;
  double product = 0.0;
};

inline GibbsState gibbs_state(const QSystem& sys, double beta1, double beta2) {
  const auto spec = detail::gibbs_spectrum(sys, beta1, beta2);
  const auto costs = detail::costs_from_spectrum(sys, spec);
  MatrixXr rho = spec.vectors * spec.probabilities.asDiagonal() * spec.vectors.transpose();
  return {beta1,
          beta2,
          DensityMatrix<double>(HermitianMatrix<double>(rho, 1e-12)),
          costs.entropy,
          costs.energy_cost,
          costs.space_cost,
          costs.product};
}

template <class Scalar>
double energy_cost(const DensityMatrix<Scalar>& rho, const QSystem& sys) {
  return trace_product(rho.matrix(), sys.hamiltonian().matrix().template cast<Scalar>());
}

template <class Scalar>
double space_cost(const DensityMatrix<Scalar>& rho, const QSystem& sys) {
  return std::real(rho.matrix().diagonal().dot(sys.grid_squared().cast<Scalar>()));
}

/// var_ρ(Q) = tr(ρQ²) − tr(ρQ)².
template <class Scalar>
double variance_Q(const DensityMatrix<Scalar>& rho, const QSystem& sys) {
  const double mean = std::real(rho.matrix().diagonal().dot(sys.grid().cast<Scalar>()));
  return space_cost(rho, sys) - mean * mean;
}

/// ‖M − (tr M/d)·I‖_max for M = log ρ + β₁H + β₂Q²; zero iff ρ has exactly
/// the Gibbs form with these multipliers.
template <class Scalar>
double stationarity_residual(const DensityMatrix<Scalar>& rho, double beta1, double beta2, const QSystem& sys) {
  if (rho.dim() != sys.dim()) throw ValidationError("stationarity_residual: dimension mismatch");
  if (rho.eigen().eigenvalues.minCoeff() < 1e-14)
    throw PreconditionError("stationarity_residual: state is rank deficient (eigenvalue < 1e-14)");
  const auto log_rho = matrix_function(rho.eigen(), [](double x) { return std::log(x); });
  Mat<Scalar> m = log_rho.matrix() + beta1 * sys.hamiltonian().matrix().template cast<Scalar>();
  m.diagonal() += (beta2 * sys.grid_squared()).template cast<Scalar>();
  const double mean = std::real(m.trace()) / static_cast<double>(sys.dim());
  m.diagonal().array() -= mean;
  return max_abs(m);
}

inline double stationarity_residual(const GibbsState& state, const QSystem& sys) {
  return stationarity_residual(state.rho, state.beta1, state.beta2, sys);
}

/// ½(ΠρΠ + ρ).
template <class Scalar>
DensityMatrix<Scalar> symmetrize(const DensityMatrix<Scalar>& rho, const HermitianMatrix<double>& pi) {
  const Mat<Scalar> p = pi.matrix().template cast<Scalar>();
  if (max_abs(p * p - Mat<Scalar>::Identity(p.rows(), p.cols())) > 1e-12)
    throw ValidationError("symmetrize: operator is not an involution");
  return DensityMatrix<Scalar>(HermitianMatrix<Scalar>(Mat<Scalar>(0.5 * (p * rho.matrix() * p + rho.matrix()))));
}

/// log tr e^{−A}, evaluated stably.
template <class Scalar>
double log_trace_exp_neg(const HermitianMatrix<Scalar>& a) {
  const VectorXd lam = -eigh(a).eigenvalues;
  const double top = lam.maxCoeff();
  return top + std::log((lam.array() - top).exp().sum());
}

/// e^{−A}/tr e^{−A}.
template <class Scalar>
DensityMatrix<Scalar> thermal_state(const HermitianMatrix<Scalar>& a) {
  const auto eig = eigh(a);
  const double bottom = eig.eigenvalues.minCoeff();
  const double z = (-(eig.eigenvalues.array() - bottom)).exp().sum();
  return DensityMatrix<Scalar>(matrix_function(eig, [&](double x) { return std::exp(-(x - bottom)) / z; }));
}

/// |tr(ρA) − [S(ρ) − log tr e^{−A} + S(ρ‖e^{−A}/tr e^{−A})]|. The thermal
/// state's logarithm is taken from the spectrum of A directly, so large A
/// does not underflow σ.
template <class Scalar>
double energy_relent_identity_residual(const DensityMatrix<Scalar>& rho, const HermitianMatrix<Scalar>& a) {
  if (rho.dim() != a.dim()) throw ValidationError("energy_relent_identity_residual: dimension mismatch");
  const double log_z = log_trace_exp_neg(a);
  const auto log_sigma = matrix_function(eigh(a), [&](double x) { return -x - log_z; });
  const double s = entropy(rho);
  const double rel = -s - trace_product(rho.matrix(), log_sigma.matrix());
  const double lhs = trace_product(rho.matrix(), a.matrix());
  return std::abs(lhs - (s - log_z + rel));
}

struct DeadendBound {
  double lhs = 0.0;  // tr(ρH)·tr(ρQ²)
  double rhs = 0.0;
  double log_trace_exp_h = 0.0;
  double log_trace_exp_q2 = 0.0;
  double jensen_energy = 0.0;  // log d − tr H/d
  double jensen_space = 0.0;   // log d − tr Q²/d

  bool holds(double tol = 1e-8) const { return lhs >= rhs - tol; }
};

/// Relative-entropy lower bound on the cost product with both partition
/// functions replaced by their Jensen bounds. Only sound when the Jensen
/// factors are not both negative; the raw numbers are returned either way.
template <class Scalar>
DeadendBound deadend_lower_bound(const QSystem& sys, const DensityMatrix<Scalar>& rho) {
  const double d = sys.dim();
  const double s = entropy(rho);
  DeadendBound b;
  b.lhs = energy_cost(rho, sys) * space_cost(rho, sys);
  b.log_trace_exp_h = log_trace_exp_neg(sys.hamiltonian());
  b.log_trace_exp_q2 = log_trace_exp_neg(sys.position_squared());
  b.jensen_energy = std::log(d) - sys.hamiltonian().trace() / d;
  b.jensen_space = std::log(d) - sys.grid_squared().sum() / d;
  b.rhs = s * s - s * (b.log_trace_exp_h + b.log_trace_exp_q2) + b.jensen_energy * b.jensen_space;
  return b;
}

}  // namespace entrobound
