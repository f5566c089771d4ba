#pragma once

// Dense Hermitian linear algebra: eigendecomposition, spectral calculus,
// von Neumann entropy and relative entropy. Everything here works for real
// symmetric (Scalar = double) and complex Hermitian (Scalar = cplx) matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "entrobound/errors.hpp"

namespace entrobound {

using cplx = std::complex<double>;
using Index = Eigen::Index;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixXr = Mat<double>;
using MatrixXc = Mat<cplx>;
using Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kClampTol = 1e-10;
inline constexpr double kKernelTol = 1e-12;

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

/// Largest absolute entry.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Real part of tr(A·B) without forming the product.
template <class DA, class DB>
double trace_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  // tr(AB) = sum_ij A_ij B_ji
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) acc += std::real(a(i, j) * b(j, i));
  return acc;
}

/// Self-adjoint dense matrix. Construction validates the symmetry within
/// `tol` and then stores the exactly symmetrized matrix (A + A†)/2.
template <class Scalar>
class HermitianMatrix {
 public:
  using scalar_type = Scalar;
  using matrix_type = Mat<Scalar>;

  explicit HermitianMatrix(const matrix_type& m, double tol = kHermitianTol) {
    if (m.rows() < 1 || m.rows() != m.cols())
      throw ValidationError("HermitianMatrix requires a non-empty square matrix");
    if (!m.allFinite()) throw ValidationError("HermitianMatrix has non-finite entries");
    const double viol = max_abs(m - m.adjoint());
    if (viol > tol) {
      std::ostringstream os;
      os << "matrix is not Hermitian: max |A - A^dagger| = " << viol << " > " << tol;
      throw ValidationError(os.str());
    }
    m_ = (m + m.adjoint()) / 2.0;
  }

  static HermitianMatrix diagonal(const VectorXd& d) {
    return HermitianMatrix(d.cast<Scalar>().asDiagonal().toDenseMatrix());
  }
  static HermitianMatrix identity(Index dim) {
    return HermitianMatrix(matrix_type::Identity(dim, dim));
  }
  static HermitianMatrix zero(Index dim) { return HermitianMatrix(matrix_type::Zero(dim, dim)); }

  Index dim() const { return m_.rows(); }
  const matrix_type& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return std::real(m_.trace()); }

  /// Promote to a complex Hermitian matrix (identity for complex input).
  HermitianMatrix<cplx> to_complex() const { return HermitianMatrix<cplx>(m_.template cast<cplx>()); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(s * a.m_); }
  friend HermitianMatrix operator*(const HermitianMatrix& a, double s) { return s * a; }

 private:
  matrix_type m_;
};

template <class Scalar>
struct EigenDecomposition {
  VectorXd eigenvalues;      // ascending
  Mat<Scalar> eigenvectors;  // column i pairs with eigenvalue i

  Mat<Scalar> reconstruct() const {
    return eigenvectors * eigenvalues.cast<Scalar>().asDiagonal() * eigenvectors.adjoint();
  }
  /// Largest residual ‖A v_i − λ_i v_i‖₂ over all pairs.
  double max_residual(const Mat<Scalar>& a) const {
    double worst = 0.0;
    for (Index i = 0; i < eigenvalues.size(); ++i)
      worst = std::max(worst, (a * eigenvectors.col(i) - eigenvalues(i) * eigenvectors.col(i)).norm());
    return worst;
  }
  double unitarity_violation() const {
    const Index n = eigenvectors.cols();
    return max_abs(eigenvectors.adjoint() * eigenvectors - Mat<Scalar>::Identity(n, n));
  }
};

template <class Scalar>
EigenDecomposition<Scalar> eigh(const HermitianMatrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// U·diag(f(λ))·U† for an already decomposed matrix.
template <class Scalar, class F>
HermitianMatrix<Scalar> matrix_function(const EigenDecomposition<Scalar>& eig, F&& f) {
  const Index n = eig.eigenvalues.size();
  VectorXd mapped(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = eig.eigenvalues(i);
    const double v = f(lam);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "matrix_function: f is not finite at eigenvalue " << lam << " (index " << i << ")";
      throw DomainError(os.str());
    }
    mapped(i) = v;
  }
  // Symmetrization tolerance scales with the result magnitude.
  Mat<Scalar> out = eig.eigenvectors * mapped.cast<Scalar>().asDiagonal() * eig.eigenvectors.adjoint();
  const double scale = 1.0 + (n > 0 ? mapped.cwiseAbs().maxCoeff() : 0.0);
  return HermitianMatrix<Scalar>(out, 1e-10 * scale);
}

template <class Scalar, class F>
HermitianMatrix<Scalar> matrix_function(const HermitianMatrix<Scalar>& a, F&& f) {
  return matrix_function(eigh(a), std::forward<F>(f));
}

/// U·diag(g(λ))·U† for a complex-valued g; the result is generally not
/// Hermitian (e.g. exp(−iP) is unitary).
template <class Scalar, class G>
MatrixXc spectral_map(const HermitianMatrix<Scalar>& a, G&& g) {
  const auto eig = eigh(a);
  const Index n = eig.eigenvalues.size();
  Eigen::VectorXcd mapped(n);
  for (Index i = 0; i < n; ++i) mapped(i) = g(eig.eigenvalues(i));
  const MatrixXc u = eig.eigenvectors.template cast<cplx>();
  return u * mapped.asDiagonal() * u.adjoint();
}

/// x·log x with 0·log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Positive semidefinite, unit-trace Hermitian matrix. The eigendecomposition
/// computed during validation is retained.
template <class Scalar>
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix<Scalar> h) : h_(std::move(h)), eig_(eigh(h_)) {
    const double tr = h_.trace();
    if (std::abs(tr - 1.0) > kClampTol) {
      std::ostringstream os;
      os.precision(17);
      os << "density matrix trace is " << tr << ", expected 1";
      throw ValidationError(os.str());
    }
    if (eig_.eigenvalues(0) < -kClampTol) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << eig_.eigenvalues(0);
      throw ValidationError(os.str());
    }
    if (eig_.eigenvalues(eig_.eigenvalues.size() - 1) > 1.0 + kClampTol)
      throw ValidationError("density matrix has eigenvalue above 1");
  }
  explicit DensityMatrix(const Mat<Scalar>& m) : DensityMatrix(HermitianMatrix<Scalar>(m)) {}

  static DensityMatrix maximally_mixed(Index dim) {
    return DensityMatrix(Mat<Scalar>(Mat<Scalar>::Identity(dim, dim) / static_cast<double>(dim)));
  }
  /// |ψ⟩⟨ψ| for a vector normalized internally.
  template <class Derived>
  static DensityMatrix pure(const Eigen::MatrixBase<Derived>& psi) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = psi.template cast<Scalar>().normalized();
    return DensityMatrix(Mat<Scalar>(v * v.adjoint()));
  }

  Index dim() const { return h_.dim(); }
  const HermitianMatrix<Scalar>& hermitian() const { return h_; }
  const Mat<Scalar>& matrix() const { return h_.matrix(); }
  const EigenDecomposition<Scalar>& eigen() const { return eig_; }

  /// Eigenvalues clamped into [0, 1].
  VectorXd probabilities() const { return eig_.eigenvalues.cwiseMax(0.0).cwiseMin(1.0); }

  DensityMatrix<cplx> to_complex() const { return DensityMatrix<cplx>(h_.to_complex()); }

 private:
  HermitianMatrix<Scalar> h_;
  EigenDecomposition<Scalar> eig_;
};

template <class Scalar>
double entropy(const DensityMatrix<Scalar>& rho) {
  double s = 0.0;
  for (Index i = 0; i < rho.dim(); ++i) {
    const double lam = rho.eigen().eigenvalues(i);
    if (lam < -kClampTol || lam > 1.0 + kClampTol)
      throw ValidationError("entropy: eigenvalue outside [0,1] beyond clamp tolerance");
    s -= xlogx(std::clamp(lam, 0.0, 1.0));
  }
  return std::max(s, 0.0);
}

/// S(ρ‖σ) = −tr(ρ log σ) − S(ρ); +∞ when supp ρ meets ker σ.
template <class Scalar>
double relative_entropy(const DensityMatrix<Scalar>& rho, const DensityMatrix<Scalar>& sigma) {
  if (rho.dim() != sigma.dim()) throw ValidationError("relative_entropy: dimension mismatch");
  const auto& sig = sigma.eigen();
  double cross = 0.0;  // tr(ρ log σ)
  for (Index j = 0; j < sig.eigenvalues.size(); ++j) {
    const auto v = sig.eigenvectors.col(j);
    const double weight = std::real(v.dot(rho.matrix() * v));
    const double mu = sig.eigenvalues(j);
    if (mu < kKernelTol) {
      if (weight > kKernelTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(mu);
  }
  return -cross - entropy(rho);
}

/// Trace distance ½‖ρ − σ‖₁.
template <class Scalar>
double trace_distance(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  const auto eig = eigh(HermitianMatrix<Scalar>(a - b, 1e-9));
  return 0.5 * eig.eigenvalues.cwiseAbs().sum();
}

/// |central difference of S along V − tr(V(−I − log ρ))|. The caller checks
/// that the result scales like h².
template <class Scalar>
double entropy_gradient_check(const DensityMatrix<Scalar>& rho, const HermitianMatrix<Scalar>& v, double h) {
  if (v.dim() != rho.dim()) throw ValidationError("entropy_gradient_check: dimension mismatch");
  const VectorXd& lam = rho.eigen().eigenvalues;
  if (lam.minCoeff() < 1e-6 || lam.maxCoeff() > 1.0 - 1e-6)
    throw PreconditionError("entropy_gradient_check: state is not interior (eigenvalues must lie in [1e-6, 1-1e-6])");
  if (std::abs(v.trace()) > 1e-10) throw PreconditionError("entropy_gradient_check: direction must be traceless");
  const double vnorm = eigh(v).eigenvalues.cwiseAbs().maxCoeff();
  if (vnorm > 1.0 + 1e-12) throw PreconditionError("entropy_gradient_check: direction must have spectral norm <= 1");
  if (!(h > 0.0)) throw PreconditionError("entropy_gradient_check: step must be positive");
  if (vnorm == 0.0) return 0.0;
  if (h * vnorm >= lam.minCoeff()) throw PreconditionError("entropy_gradient_check: step leaves the positive cone");

  // Probe entropies in long double: at h = 1e-4 double roundoff (~1e-12)
  // would otherwise swamp the O(h^2) term along flat directions.
  using Wide = std::conditional_t<std::is_same_v<Scalar, double>, long double, std::complex<long double>>;
  using WideMat = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  auto wide_entropy = [&](double sign) {
    const WideMat m = rho.matrix().template cast<Wide>() +
                      static_cast<long double>(sign * h) * v.matrix().template cast<Wide>();
    Eigen::SelfAdjointEigenSolver<WideMat> es(m, Eigen::EigenvaluesOnly);
    long double s = 0.0L;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      const long double x = es.eigenvalues()(i);
      if (x > 0.0L) s -= x * std::log(x);
    }
    return s;
  };
  const double numeric = static_cast<double>((wide_entropy(1.0) - wide_entropy(-1.0)) / (2.0L * h));

  const auto gradient = matrix_function(rho.eigen(), [](double x) { return -1.0 - std::log(x); });
  const double analytic = trace_product(v.matrix(), gradient.matrix());
  return std::abs(numeric - analytic);
}

}  // namespace entrobound
