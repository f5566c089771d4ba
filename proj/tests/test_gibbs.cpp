#include <gtest/gtest.h>

#include <cmath>

#include "entrobound/gibbs.hpp"
#include "entrobound/random.hpp"

using namespace entrobound;

TEST(GibbsState, ZeroBetasGiveMaximallyMixed) {
  const QSystem sys({7, {{2, 1.0}}});
  const auto g = gibbs_state(sys, 0.0, 0.0);
  EXPECT_NEAR(g.entropy, std::log(7.0), 1e-14);
  EXPECT_LE(max_abs(g.rho.matrix() - MatrixXr::Identity(7, 7) / 7.0), 1e-15);
  EXPECT_NEAR(g.space_cost, sys.grid_squared().sum() / 7.0, 1e-12);
}

TEST(GibbsState, LargeBetaApproachesGround) {
  const QSystem sys({6, {{2, 1.0}}});
  ASSERT_GT(sys.energies()(1) - sys.energies()(0), 1e-2);
  const auto g = gibbs_state(sys, 1e3, 0.0);
  EXPECT_LE(g.entropy, 1e-6);
  EXPECT_LE(g.energy_cost, 1e-6);
  EXPECT_GE(g.energy_cost, -1e-9);
}

TEST(GibbsState, MatchesDirectExponential) {
  const QSystem sys({5, {{1, 0.5}}});
  const double b1 = 0.7, b2 = -0.2;
  const HermitianMatrix<double> a(MatrixXr(b1 * sys.hamiltonian().matrix() +
                                           MatrixXr((b2 * sys.grid_squared()).asDiagonal())));
  const auto e = matrix_function(a, [](double x) { return std::exp(-x); });
  const MatrixXr want = e.matrix() / e.trace();
  const auto g = gibbs_state(sys, b1, b2);
  EXPECT_LE(max_abs(g.rho.matrix() - want), 1e-9);
  EXPECT_NEAR(g.energy_cost, energy_cost(g.rho, sys), 1e-12);
  EXPECT_NEAR(g.space_cost, space_cost(g.rho, sys), 1e-12);
  EXPECT_NEAR(g.entropy, entropy(g.rho), 1e-12);
  EXPECT_DOUBLE_EQ(g.product, g.energy_cost * g.space_cost);
}

TEST(GibbsState, ExtremeBetasStayFinite) {
  const QSystem sys({10, {{4, 10.0}}});
  for (double b1 : {-5.0, 5.0})
    for (double b2 : {-0.5, 2.0}) {
      const auto c = gibbs_costs(sys, b1, b2);
      EXPECT_TRUE(std::isfinite(c.product));
      EXPECT_GE(c.entropy, 0.0);
      EXPECT_LE(c.entropy, std::log(10.0));
    }
}

TEST(GibbsState, Deterministic) {
  const QSystem sys({8, {{-1, 1.0}}});
  const auto a = gibbs_costs(sys, 0.3, 0.4), b = gibbs_costs(sys, 0.3, 0.4);
  EXPECT_EQ(a.entropy, b.entropy);
  EXPECT_EQ(a.product, b.product);
}

TEST(Stationarity, GibbsStatesAreStationary) {
  Rng rng(101);
  for (int k = 0; k < 60; ++k) {
    const int d = (k % 3 == 0) ? 4 : (k % 3 == 1 ? 8 : 16);
    const QSystem sys(random_spec(d, rng));
    const auto p = random_gibbs_parameters(sys, rng);
    EXPECT_LE(stationarity_residual(gibbs_state(sys, p.beta1, p.beta2), sys), 1e-8) << sys.spec().label();
  }
}

TEST(Stationarity, MaximallyMixedAtZero) {
  const QSystem sys({5, {}});
  EXPECT_LE(stationarity_residual(DensityMatrix<double>::maximally_mixed(5), 0.0, 0.0, sys), 1e-12);
}

TEST(Stationarity, DetectsNonGibbsMixture) {
  const QSystem sys({6, {{2, 0.5}}});
  const auto g = gibbs_state(sys, 0.5, 0.3);
  Rng rng(5);
  const auto other = random_density<double>(6, rng);
  const DensityMatrix<double> mixed(MatrixXr(0.99 * g.rho.matrix() + 0.01 * other.matrix()));
  EXPECT_GT(stationarity_residual(mixed, 0.5, 0.3, sys), 1e-4);
}

TEST(Stationarity, RankDeficientRejected) {
  const QSystem sys({3, {}});
  VectorXd psi = VectorXd::Zero(3);
  psi(0) = 1.0;
  EXPECT_THROW(stationarity_residual(DensityMatrix<double>::pure(psi), 0.0, 0.0, sys), PreconditionError);
}

TEST(Monotonicity, EnergyNonIncreasingInBeta1) {
  for (const auto& spec : monomial_family({6, 9}, {0.1, 1, 10}, {1, 2, 4})) {
    const QSystem sys(spec);
    double prev = INFINITY;
    for (int i = 0; i <= 40; ++i) {
      const double e = gibbs_costs(sys, -5.0 + 0.25 * i, 0.0).energy_cost;
      EXPECT_LE(e, prev + 1e-12) << spec.label();
      prev = e;
    }
  }
}

TEST(Symmetrize, PreservesCostsAndRaisesEntropy) {
  Rng rng(77);
  const QSystem sys({6, {{2, 1.0}, {-1, 0.5}}});
  const auto pi = parity(6);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density<cplx>(6, rng, 0.05);
    const auto s = symmetrize(rho, pi);
    EXPECT_NEAR(energy_cost(s, sys), energy_cost(rho, sys), 1e-10);
    EXPECT_NEAR(space_cost(s, sys), space_cost(rho, sys), 1e-10);
    EXPECT_GE(entropy(s), entropy(rho) - 1e-9);
    const MatrixXc p = pi.matrix().cast<cplx>();
    EXPECT_LE(max_abs(p * s.matrix() - s.matrix() * p), 1e-10);
    EXPECT_NEAR(variance_Q(s, sys), space_cost(s, sys), 1e-10);
  }
}

TEST(Symmetrize, SymmetricInputUnchanged) {
  const QSystem sys({6, {{2, 1.0}}});
  const auto g = gibbs_state(sys, 0.4, 0.1);
  EXPECT_LE(max_abs(symmetrize(g.rho, parity(6)).matrix() - g.rho.matrix()), 1e-12);
}

TEST(Symmetrize, RejectsNonInvolution) {
  const auto rho = DensityMatrix<double>::maximally_mixed(3);
  EXPECT_THROW(symmetrize(rho, HermitianMatrix<double>(MatrixXr(2.0 * MatrixXr::Identity(3, 3)))), ValidationError);
}

TEST(VarianceQ, ReferenceValues) {
  const QSystem sys({3, {}});
  EXPECT_NEAR(variance_Q(DensityMatrix<double>::maximally_mixed(3), sys), 2.0 / 3.0, 1e-15);
  VectorXd psi = VectorXd::Zero(3);
  psi(2) = 1.0;
  EXPECT_NEAR(variance_Q(DensityMatrix<double>::pure(psi), sys), 0.0, 1e-15);
}

TEST(RelentIdentity, ThermalStateHasZeroRelativeTerm) {
  Rng rng(3);
  const auto a = random_hermitian<cplx>(5, rng);
  EXPECT_LE(energy_relent_identity_residual(thermal_state(a), a), 1e-9);
}

TEST(RelentIdentity, RandomFullRankInputs) {
  Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    const auto rho = random_density<cplx>(5, rng);
    EXPECT_LE(energy_relent_identity_residual(rho, random_hermitian<cplx>(5, rng, 2.0)), 1e-8);
  }
}

TEST(RelentIdentity, ZeroOperator) {
  Rng rng(8);
  const auto rho = random_density<double>(4, rng);
  EXPECT_LE(energy_relent_identity_residual(rho, HermitianMatrix<double>::zero(4)), 1e-12);
  EXPECT_NEAR(relative_entropy(rho, DensityMatrix<double>::maximally_mixed(4)), std::log(4.0) - entropy(rho), 1e-12);
}

TEST(RelentIdentity, LargeOperatorDoesNotUnderflow) {
  const auto rho = DensityMatrix<double>::maximally_mixed(2);
  MatrixXr a(2, 2);
  a << 0.0, 0.0, 0.0, 1e4;
  EXPECT_LE(energy_relent_identity_residual(rho, HermitianMatrix<double>(a)), 1e-8);
}

TEST(DeadendBound, MaximallyMixed) {
  for (const auto& spec : monomial_family({4}, {0.1, 1, 10}, {-1, 1, 2})) {
    const QSystem sys(spec);
    const auto rho = DensityMatrix<double>::maximally_mixed(4);
    const auto b = deadend_lower_bound(sys, rho);
    EXPECT_NEAR(b.lhs, sys.hamiltonian().trace() / 4.0 * sys.grid_squared().sum() / 4.0, 1e-12);
    EXPECT_TRUE(b.holds()) << spec.label();
  }
}

TEST(DeadendBound, PureStateReducesToJensenProduct) {
  const QSystem sys({4, {{2, 1.0}}});
  const auto ground = DensityMatrix<double>::pure(VectorXd(sys.energy_states().col(0)));
  const auto b = deadend_lower_bound(sys, ground);
  EXPECT_NEAR(b.rhs, b.jensen_energy * b.jensen_space, 1e-12);
}

TEST(DeadendBound, HoldsOnFourDimensionalGibbsStates) {
  Rng rng(606);
  for (int k = 0; k < 100; ++k) {
    const QSystem sys(random_spec(4, rng));
    const auto p = random_gibbs_parameters(sys, rng);
    const auto b = deadend_lower_bound(sys, gibbs_state(sys, p.beta1, p.beta2).rho);
    EXPECT_TRUE(b.holds()) << sys.spec().label() << " lhs=" << b.lhs << " rhs=" << b.rhs;
  }
}

// Once both Jensen factors log d − tr(X)/d are negative their product is a
// large positive constant and the chain no longer bounds the cost product.
TEST(DeadendBound, FailsWhenBothJensenFactorsAreNegative) {
  const QSystem sys({8, {{2, 1.0}}});
  const auto rho = DensityMatrix<double>::pure(VectorXd(sys.energy_states().col(0)));
  const auto b = deadend_lower_bound(sys, rho);
  ASSERT_LT(b.jensen_energy, 0.0);
  ASSERT_LT(b.jensen_space, 0.0);
  EXPECT_FALSE(b.holds());
}
