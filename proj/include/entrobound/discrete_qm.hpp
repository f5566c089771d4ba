#pragma once

// Finite-dimensional position/momentum algebra on a centered unit-spaced grid
// and Hamiltonians H = ±½P² + V(Q) normalized to ground energy 0.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entrobound/matfun.hpp"

namespace entrobound {

/// Sign in front of ½P². `Negative` gives H = −½P² + V, the convention under
/// which the reference bound coefficient is reproduced.
enum class KineticSign { Positive, Negative };

inline const char* to_string(KineticSign k) { return k == KineticSign::Positive ? "positive" : "negative"; }

/// One potential term sign(n)·θ·|Q|ⁿ.
struct PotentialTerm {
  int exponent = 0;
  double factor = 1.0;

  friend bool operator==(const PotentialTerm&, const PotentialTerm&) = default;
};

struct HamiltonianSpec {
  int dim = 2;
  std::vector<PotentialTerm> terms;
  KineticSign kinetic = KineticSign::Positive;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;

  bool has_negative_exponent() const {
    for (const auto& t : terms)
      if (t.exponent < 0) return true;
    return false;
  }

  std::string label() const {
    std::ostringstream os;
    os << "d=" << dim << " terms=[";
    for (std::size_t i = 0; i < terms.size(); ++i)
      os << (i ? "," : "") << "(" << terms[i].exponent << "," << terms[i].factor << ")";
    os << "] kinetic=" << to_string(kinetic);
    return os.str();
  }

  void validate() const {
    if (dim < 2) throw ValidationError("HamiltonianSpec: dim must be >= 2 (" + label() + ")");
    for (const auto& t : terms)
      if (!(t.factor > 0.0) || !std::isfinite(t.factor))
        throw ValidationError("HamiltonianSpec: term factors must be positive and finite (" + label() + ")");
    // Odd grids contain x = 0 where |x|^n diverges for n < 0.
    if (dim % 2 == 1 && has_negative_exponent())
      throw ValidationError("HamiltonianSpec: negative exponent requires an even dimension (" + label() + ")");
  }
};

/// x_k = k − (d−1)/2, k = 0..d−1.
inline VectorXd centered_grid(int d) {
  VectorXd g(d);
  for (int k = 0; k < d; ++k) g(k) = k - (d - 1) / 2.0;
  return g;
}

/// F_ab = exp(i·2π·a·b/d)/√d over centered indices; column b is the momentum
/// eigenvector ψ_b.
inline MatrixXc centered_dft(int d) {
  const VectorXd g = centered_grid(d);
  MatrixXc f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) f(r, c) = std::polar(norm, 2.0 * std::numbers::pi * g(r) * g(c) / d);
  return f;
}

inline int sign_of(int n) { return (n > 0) - (n < 0); }

/// V on the grid; throws if any entry is not finite.
inline VectorXd potential(const HamiltonianSpec& spec) {
  spec.validate();
  const VectorXd g = centered_grid(spec.dim);
  VectorXd v = VectorXd::Zero(spec.dim);
  for (const auto& t : spec.terms) {
    if (t.exponent == 0) continue;
    for (int k = 0; k < spec.dim; ++k) v(k) += sign_of(t.exponent) * t.factor * std::pow(std::abs(g(k)), t.exponent);
  }
  if (!v.allFinite()) throw ValidationError("potential is not finite on the grid (" + spec.label() + ")");
  return v;
}

inline MatrixXc translation(int d) {
  if (d < 2) throw ValidationError("translation: d must be >= 2");
  MatrixXc t = MatrixXc::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) t(k + 1, k) = 1.0;
  t(0, d - 1) = (d % 2 == 1) ? 1.0 : -1.0;  // (−1)^{d+1}
  return t;
}

/// The same cyclic shift acting on momentum eigenvectors.
inline MatrixXc boost(int d) {
  const MatrixXc f = centered_dft(d);
  return f * translation(d) * f.adjoint();
}

inline HermitianMatrix<double> parity(int d) {
  if (d < 2) throw ValidationError("parity: d must be >= 2");
  MatrixXr p = MatrixXr::Zero(d, d);
  for (int k = 0; k < d; ++k) p(k, d - 1 - k) = 1.0;
  return HermitianMatrix<double>(p);
}

/// Immutable discrete system built from a HamiltonianSpec. H is real
/// symmetric (P² is real for the centered DFT), so it is stored as such.
class QSystem {
 public:
  explicit QSystem(HamiltonianSpec spec)
      : spec_(std::move(spec)),
        grid_(centered_grid(spec_.dim)),
        fourier_(centered_dft(spec_.dim)),
        position_(HermitianMatrix<double>::diagonal(grid_)),
        momentum_(build_momentum(fourier_, spec_.dim)),
        potential_(potential(spec_)),
        hamiltonian_(HermitianMatrix<double>::zero(spec_.dim)) {
    const int d = spec_.dim;
    const double kin = spec_.kinetic == KineticSign::Positive ? 0.5 : -0.5;
    const MatrixXc hc = kin * momentum_.matrix() * momentum_.matrix() +
                        MatrixXc(potential_.cast<cplx>().asDiagonal());
    const double scale = 1.0 + max_abs(hc);
    if (max_abs(hc.imag()) > 1e-10 * scale) throw NumericError("Hamiltonian has a non-negligible imaginary part");
    const HermitianMatrix<double> raw(MatrixXr(hc.real()), 1e-10 * scale);

    auto eig = eigh(raw);
    ground_shift_ = eig.eigenvalues(0);
    hamiltonian_ = HermitianMatrix<double>(MatrixXr(raw.matrix() - ground_shift_ * MatrixXr::Identity(d, d)),
                                           1e-10 * scale);
    eig.eigenvalues.array() -= ground_shift_;
    energies_ = eig.eigenvalues;
    energy_states_ = eig.eigenvectors;
    grid_sq_ = grid_.array().square();
    qsq_energy_basis_ = energy_states_.transpose() * grid_sq_.asDiagonal() * energy_states_;
  }

  const HamiltonianSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  const VectorXd& grid() const { return grid_; }
  /// Q² diagonal on the grid.
  const VectorXd& grid_squared() const { return grid_sq_; }
  const MatrixXc& fourier() const { return fourier_; }
  const HermitianMatrix<double>& position() const { return position_; }
  HermitianMatrix<double> position_squared() const { return HermitianMatrix<double>::diagonal(grid_sq_); }
  const HermitianMatrix<cplx>& momentum() const { return momentum_; }
  const VectorXd& potential_values() const { return potential_; }
  const HermitianMatrix<double>& hamiltonian() const { return hamiltonian_; }
  const VectorXd& energies() const { return energies_; }
  const MatrixXr& energy_states() const { return energy_states_; }
  const MatrixXr& qsq_energy_basis() const { return qsq_energy_basis_; }
  /// Minimum eigenvalue of the un-normalized ½P² + V.
  double ground_shift() const { return ground_shift_; }

 private:
  static HermitianMatrix<cplx> build_momentum(const MatrixXc& f, int d) {
    const VectorXd p = centered_grid(d) * (2.0 * std::numbers::pi / d);
    return HermitianMatrix<cplx>(MatrixXc(f * p.cast<cplx>().asDiagonal() * f.adjoint()), 1e-10);
  }

  HamiltonianSpec spec_;
  VectorXd grid_;
  VectorXd grid_sq_;
  MatrixXc fourier_;
  HermitianMatrix<double> position_;
  HermitianMatrix<cplx> momentum_;
  VectorXd potential_;
  HermitianMatrix<double> hamiltonian_;
  VectorXd energies_;
  MatrixXr energy_states_;
  MatrixXr qsq_energy_basis_;
  double ground_shift_ = 0.0;
};

inline QSystem build_system(const HamiltonianSpec& spec) { return QSystem(spec); }

/// Cartesian product of single-monomial specs, ordered dim-major, then
/// exponent, then theta. (negative exponent, odd dim) pairs are dropped.
inline std::vector<HamiltonianSpec> monomial_family(const std::vector<int>& dims, const std::vector<double>& thetas,
                                                    const std::vector<int>& exponents,
                                                    KineticSign kinetic = KineticSign::Positive) {
  std::vector<HamiltonianSpec> out;
  for (int d : dims)
    for (int n : exponents) {
      if (n < 0 && d % 2 == 1) continue;
      for (double theta : thetas) out.push_back({d, {{n, theta}}, kinetic});
    }
  return out;
}

/// Laurent potentials Σ aₙ·sign(n)·|Q|ⁿ with every coefficient drawn from
/// `coefficients`, one term per exponent. Ordered dim-major, then the
/// coefficient tuple lexicographically (first exponent slowest).
inline std::vector<HamiltonianSpec> laurent_family(const std::vector<int>& dims, const std::vector<double>& coefficients,
                                                   const std::vector<int>& exponents = {-2, -1, 1, 2},
                                                   KineticSign kinetic = KineticSign::Positive) {
  std::vector<HamiltonianSpec> out;
  if (coefficients.empty()) return out;
  bool negative = false;
  for (int n : exponents) negative = negative || n < 0;
  for (int d : dims) {
    if (negative && d % 2 == 1) continue;
    std::vector<std::size_t> idx(exponents.size(), 0);
    while (true) {
      HamiltonianSpec s{d, {}, kinetic};
      for (std::size_t k = 0; k < exponents.size(); ++k) s.terms.push_back({exponents[k], coefficients[idx[k]]});
      out.push_back(std::move(s));
      std::size_t k = exponents.size();
      while (k > 0 && ++idx[k - 1] == coefficients.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

}  // namespace entrobound
