#pragma once

// Direct numerical maximization of S(ρ) subject to tr(ρH) = C1, tr(ρQ²) = C2.
// This is a test oracle for the Gibbs closed form: it never uses the
// exponential family. ρ is parameterized as W·B·B†·W†/tr(BB†) with an
// unconstrained complex factor B (W spans the feasible face, identity in the
// interior case). Constraints are enforced with an augmented Lagrangian whose
// inner problems are solved by L-BFGS.

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <sstream>
#include <vector>

#include "entrobound/discrete_qm.hpp"
#include "entrobound/matfun.hpp"

namespace entrobound {

struct MaxEntropyOptions {
  int max_outer = 40;
  int max_inner = 400;
  int memory = 12;
  double gradient_tol = 1e-9;      // inner L-BFGS stopping norm
  double target_residual = 1e-10;  // scaled constraint residual to stop at
  double certify_residual = 1e-6;  // absolute residual accepted as feasible
  std::uint64_t seed = 20240607;
};

struct MaxEntropyReport {
  DensityMatrix<cplx> rho;
  double energy_residual = 0.0;
  double space_residual = 0.0;
  double gradient_norm = 0.0;
  int outer_iterations = 0;
};

namespace detail {

struct Constraint {
  MatrixXc op;  // restricted to the working subspace
  double target;
  double scale;
};

class AugmentedEntropy {
 public:
  AugmentedEntropy(std::vector<Constraint> cons, Index k) : cons_(std::move(cons)), k_(k), lambda_(cons_.size(), 0.0) {}

  Index k() const { return k_; }
  std::vector<double>& multipliers() { return lambda_; }
  double& penalty() { return mu_; }

  static MatrixXc state(const MatrixXc& b) {
    MatrixXc m = b * b.adjoint();
    return m / std::real(m.trace());
  }

  std::vector<double> residuals(const MatrixXc& sigma) const {
    std::vector<double> r;
    for (const auto& c : cons_) r.push_back((trace_product(sigma, c.op) - c.target) / c.scale);
    return r;
  }

  /// Objective value and gradient with respect to B.
  double evaluate(const MatrixXc& b, MatrixXc& grad) const {
    const double t = std::real((b * b.adjoint()).trace());
    const MatrixXc sigma = state(b);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(MatrixXc((sigma + sigma.adjoint()) / 2.0));
    const VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    double neg_entropy = 0.0;
    VectorXd log_lam(lam.size());
    for (Index i = 0; i < lam.size(); ++i) {
      log_lam(i) = std::log(std::max(lam(i), 1e-300));
      neg_entropy += xlogx(lam(i));
    }
    const auto r = residuals(sigma);
    double value = neg_entropy;
    MatrixXc g = es.eigenvectors() * log_lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    for (std::size_t j = 0; j < cons_.size(); ++j) {
      value += lambda_[j] * r[j] + 0.5 * mu_ * r[j] * r[j];
      g += ((lambda_[j] + mu_ * r[j]) / cons_[j].scale) * cons_[j].op;
    }
    const double mean = trace_product(g, sigma);
    g.diagonal().array() -= mean;
    grad = (2.0 / t) * g * b;
    return value;
  }

 private:
  std::vector<Constraint> cons_;
  Index k_;
  std::vector<double> lambda_;
  double mu_ = 10.0;
};

inline double inner(const MatrixXc& a, const MatrixXc& b) { return std::real((a.adjoint() * b).trace()); }

/// L-BFGS with Armijo backtracking. Returns the final gradient norm.
inline double lbfgs_minimize(const AugmentedEntropy& obj, MatrixXc& b, int max_iter, int memory, double gtol) {
  MatrixXc g;
  double f = obj.evaluate(b, g);
  std::deque<std::pair<MatrixXc, MatrixXc>> hist;  // (s, y)
  double gnorm = std::sqrt(inner(g, g));
  for (int it = 0; it < max_iter && gnorm > gtol; ++it) {
    // Two-loop recursion.
    MatrixXc q = g;
    std::vector<double> alpha(hist.size());
    for (std::size_t i = hist.size(); i-- > 0;) {
      const auto& [s, y] = hist[i];
      alpha[i] = inner(s, q) / inner(y, s);
      q -= alpha[i] * y;
    }
    if (!hist.empty()) {
      const auto& [s, y] = hist.back();
      q *= inner(s, y) / inner(y, y);
    } else {
      q /= std::max(gnorm, 1.0);
    }
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const auto& [s, y] = hist[i];
      const double beta = inner(y, q) / inner(y, s);
      q += (alpha[i] - beta) * s;
    }
    MatrixXc dir = -q;
    double slope = inner(g, dir);
    if (slope >= 0.0) {
      hist.clear();
      dir = -g / std::max(gnorm, 1.0);
      slope = inner(g, dir);
    }
    double step = 1.0;
    MatrixXc bn, gn;
    double fn = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      bn = b + step * dir;
      fn = obj.evaluate(bn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    MatrixXc s = bn - b;
    MatrixXc y = gn - g;
    if (inner(s, y) > 1e-18) {
      hist.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(hist.size()) > memory) hist.pop_front();
    }
    const double df = f - fn;
    b = std::move(bn);
    g = std::move(gn);
    f = fn;
    gnorm = std::sqrt(inner(g, g));
    if (df >= 0.0 && df < 1e-17 * (1.0 + std::abs(f))) break;
  }
  return gnorm;
}

/// Orthonormal basis of the eigenspace of `op` (restricted to `basis`) at its
/// extreme eigenvalue, if `target` sits at that extreme. Otherwise returns
/// `basis` unchanged.
inline MatrixXc restrict_to_face(const MatrixXc& basis, const MatrixXc& op, double target, bool& on_face) {
  const MatrixXc restricted = basis.adjoint() * op * basis;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(MatrixXc((restricted + restricted.adjoint()) / 2.0));
  const VectorXd& lam = es.eigenvalues();
  const double lo = lam(0), hi = lam(lam.size() - 1);
  const double tol = 1e-10 * (1.0 + std::abs(lo) + std::abs(hi));
  on_face = false;
  if (target < lo - tol || target > hi + tol) {
    std::ostringstream os;
    os.precision(17);
    os << "brute_force_max_entropy: constraint value " << target << " outside the spectrum range [" << lo << ", "
       << hi << "]";
    throw InfeasibleError(os.str());
  }
  std::vector<Index> cols;
  if (std::abs(target - lo) <= tol) {
    for (Index i = 0; i < lam.size(); ++i)
      if (lam(i) <= lo + 1e-9 * (1.0 + std::abs(lo))) cols.push_back(i);
  } else if (std::abs(target - hi) <= tol) {
    for (Index i = 0; i < lam.size(); ++i)
      if (lam(i) >= hi - 1e-9 * (1.0 + std::abs(hi))) cols.push_back(i);
  }
  if (cols.empty() || cols.size() == static_cast<std::size_t>(lam.size())) return basis;
  on_face = true;
  MatrixXc face(basis.cols(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) face.col(static_cast<Index>(c)) = es.eigenvectors().col(cols[c]);
  return basis * face;
}

}  // namespace detail

inline MaxEntropyReport brute_force_max_entropy_report(const QSystem& sys, double c1, double c2,
                                                       const MaxEntropyOptions& opt = {}) {
  if (sys.dim() > 8) throw PreconditionError("brute_force_max_entropy: oracle is limited to dim <= 8");
  const MatrixXc h = sys.hamiltonian().matrix().cast<cplx>();
  const MatrixXc q2 = sys.position_squared().matrix().cast<cplx>();
  const Index d = sys.dim();

  MatrixXc basis = MatrixXc::Identity(d, d);
  bool face1 = false, face2 = false;
  basis = detail::restrict_to_face(basis, h, c1, face1);
  basis = detail::restrict_to_face(basis, q2, c2, face2);
  const Index k = basis.cols();

  std::vector<detail::Constraint> cons;
  for (auto [op, target] : {std::pair{&h, c1}, std::pair{&q2, c2}}) {
    MatrixXc r = basis.adjoint() * (*op) * basis;
    // Constant on the face: automatically satisfied, checked below.
    if (max_abs(r - (std::real(r.trace()) / static_cast<double>(k)) * MatrixXc::Identity(k, k)) <= 1e-10) continue;
    cons.push_back({std::move(r), target, std::max(1.0, std::abs(target))});
  }

  detail::AugmentedEntropy obj(cons, k);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1e-2);
  MatrixXc b = MatrixXc::Identity(k, k) / std::sqrt(static_cast<double>(k));
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) b(i, j) += cplx(gauss(rng), gauss(rng));

  int outer = 0;
  double gnorm = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  if (!cons.empty() || k > 1) {
    for (outer = 1; outer <= opt.max_outer; ++outer) {
      b /= std::sqrt(std::real((b * b.adjoint()).trace()));
      gnorm = detail::lbfgs_minimize(obj, b, opt.max_inner, opt.memory, opt.gradient_tol);
      const auto r = obj.residuals(detail::AugmentedEntropy::state(b));
      double worst = 0.0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        obj.multipliers()[j] += obj.penalty() * r[j];
        worst = std::max(worst, std::abs(r[j]));
      }
      if (worst <= opt.target_residual && (gnorm <= 10.0 * opt.gradient_tol || prev <= opt.target_residual)) break;
      if (worst > 0.25 * prev) obj.penalty() = std::min(obj.penalty() * 10.0, 1e7);
      prev = worst;
    }
  }

  const MatrixXc sigma = detail::AugmentedEntropy::state(b);
  MatrixXc rho = basis * sigma * basis.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  rho /= std::real(rho.trace());
  MaxEntropyReport rep{DensityMatrix<cplx>(HermitianMatrix<cplx>(rho)), 0.0, 0.0, gnorm, outer};
  rep.energy_residual = std::abs(trace_product(rho, h) - c1);
  rep.space_residual = std::abs(trace_product(rho, q2) - c2);
  if (rep.energy_residual > opt.certify_residual || rep.space_residual > opt.certify_residual) {
    std::ostringstream os;
    os << "brute_force_max_entropy: constraints (" << c1 << ", " << c2
       << ") not attained; residuals " << rep.energy_residual << ", " << rep.space_residual;
    throw InfeasibleError(os.str());
  }
  return rep;
}

inline DensityMatrix<cplx> brute_force_max_entropy(const QSystem& sys, double c1, double c2,
                                                   const MaxEntropyOptions& opt = {}) {
  return brute_force_max_entropy_report(sys, c1, c2, opt).rho;
}

}  // namespace entrobound
