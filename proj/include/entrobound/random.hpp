#pragma once

// Seeded generators for test inputs: Hermitian matrices, unitaries, interior
// states, traceless directions, monomial specs and Gibbs parameters.

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "entrobound/discrete_qm.hpp"
#include "entrobound/matfun.hpp"

namespace entrobound {

using Rng = std::mt19937_64;

namespace detail {

template <class Scalar>
Scalar gaussian_entry(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  if constexpr (is_complex_v<Scalar>) {
    const double re = n(rng);
    return Scalar(re, n(rng));
  } else {
    return n(rng);
  }
}

template <class Scalar>
Mat<Scalar> gaussian_matrix(Index d, Rng& rng) {
  Mat<Scalar> m(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) m(i, j) = gaussian_entry<Scalar>(rng);
  return m;
}

}  // namespace detail

/// (G + G†)/2 with i.i.d. standard normal entries in G.
template <class Scalar>
HermitianMatrix<Scalar> random_hermitian(Index d, Rng& rng, double scale = 1.0) {
  const Mat<Scalar> g = detail::gaussian_matrix<Scalar>(d, rng);
  return HermitianMatrix<Scalar>(Mat<Scalar>(scale * 0.5 * (g + g.adjoint())));
}

/// Haar-distributed unitary (orthogonal for real Scalar) from a
/// phase-corrected QR factorization.
template <class Scalar>
Mat<Scalar> random_unitary(Index d, Rng& rng) {
  const Mat<Scalar> g = detail::gaussian_matrix<Scalar>(d, rng);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(d, d);
  const Mat<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Scalar rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

/// Full-rank state U·diag(p)·U† with p ∝ floor + Uniform(0,1).
template <class Scalar>
DensityMatrix<Scalar> random_density(Index d, Rng& rng, double floor = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VectorXd p(d);
  for (Index i = 0; i < d; ++i) p(i) = floor + u(rng);
  p /= p.sum();
  const Mat<Scalar> q = random_unitary<Scalar>(d, rng);
  Mat<Scalar> m = q * p.cast<Scalar>().asDiagonal() * q.adjoint();
  m /= std::real(m.trace());
  return DensityMatrix<Scalar>(HermitianMatrix<Scalar>(m, 1e-10));
}

/// Traceless Hermitian direction with spectral norm in [0.1, 1].
template <class Scalar>
HermitianMatrix<Scalar> random_traceless(Index d, Rng& rng) {
  Mat<Scalar> v = random_hermitian<Scalar>(d, rng).matrix();
  v.diagonal().array() -= std::real(v.trace()) / static_cast<double>(d);
  const double norm = eigh(HermitianMatrix<Scalar>(v)).eigenvalues.cwiseAbs().maxCoeff();
  std::uniform_real_distribution<double> u(0.1, 1.0);
  if (norm > 0.0) v *= u(rng) / norm;
  HermitianMatrix<Scalar> out(v);
  return out;
}

/// Single-monomial spec: exponent in {−3..5}\{0} (negative only for even d),
/// factor log-uniform on [0.1, 10].
inline HamiltonianSpec random_spec(int d, Rng& rng, KineticSign kinetic = KineticSign::Positive) {
  std::uniform_int_distribution<int> pick(d % 2 == 0 ? -3 : 1, 5);
  int n = 0;
  while (n == 0) n = pick(rng);
  std::uniform_real_distribution<double> lf(std::log(0.1), std::log(10.0));
  return {d, {{n, std::exp(lf(rng))}}, kinetic};
}

struct GibbsParameters {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// (β₁, β₂) uniform on [−5, 5] × [−0.5, 2], scaled down towards the origin
/// when the spread of the exponent spectrum β₁H + β₂Q² exceeds `max_spread`,
/// so that every Gibbs eigenvalue stays above e^{−max_spread}/d.
inline GibbsParameters random_gibbs_parameters(const QSystem& sys, Rng& rng, double max_spread = 12.0) {
  std::uniform_real_distribution<double> u1(-5.0, 5.0), u2(-0.5, 2.0);
  GibbsParameters g{u1(rng), u2(rng)};
  const MatrixXr a = g.beta1 * sys.hamiltonian().matrix() + MatrixXr((g.beta2 * sys.grid_squared()).asDiagonal());
  const VectorXd lam = Eigen::SelfAdjointEigenSolver<MatrixXr>(a, Eigen::EigenvaluesOnly).eigenvalues();
  const double spread = lam.maxCoeff() - lam.minCoeff();
  if (spread > max_spread) {
    g.beta1 *= max_spread / spread;
    g.beta2 *= max_spread / spread;
  }
  return g;
}

}  // namespace entrobound
