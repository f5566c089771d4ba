#pragma once

// Closed-form harmonic-oscillator costs and the two counterexamples to the
// energy-surface bound tr(ρH)·tr(ρQ²) ≥ (ħ²d²/2m)(e^{S/d} − 1)².

#include <cmath>
#include <span>
#include <stdexcept>

#include "entrobound/errors.hpp"

namespace entrobound {

struct OscillatorParams {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0))
      throw ValidationError("OscillatorParams: hbar, mass and omega must be strictly positive");
  }
  /// Length² scale ħ/(2mω).
  double length_sq() const { return hbar / (2.0 * mass * omega); }
  /// ħ²/2m.
  double bound_scale() const { return hbar * hbar / (2.0 * mass); }
};

/// ⟨ψ_n|Q²|ψ_n⟩ = ħ/(2mω)·Σ(2n_k + 1).
inline double eigenstate_Qsq(const OscillatorParams& p, std::span<const int> n) {
  p.validate();
  double sum = 0.0;
  for (int nk : n) {
    if (nk < 0) throw ValidationError("eigenstate_Qsq: quantum numbers must be non-negative");
    sum += 2.0 * nk + 1.0;
  }
  return p.length_sq() * sum;
}

/// Raw (ħ²d²/2m)(factor·e^{S/d} − 1)², without flooring.
inline double bound_rhs_raw(const OscillatorParams& p, double s, int d, double factor) {
  p.validate();
  const double arg = factor * std::exp(s / d) - 1.0;
  return p.bound_scale() * d * d * arg * arg;
}

/// (ħ²d²/2m)(factor·e^{S/d} − 1)² with the bracket floored at 0, so the bound
/// is monotone in S even for factor < 1.
inline double bound_rhs(const OscillatorParams& p, double s, int d, double factor) {
  p.validate();
  if (s < 0.0 || d < 1 || !(factor > 0.0)) throw ValidationError("bound_rhs: need S >= 0, d >= 1, factor > 0");
  const double arg = std::max(0.0, factor * std::exp(s / d) - 1.0);
  return p.bound_scale() * d * d * arg * arg;
}

struct Counterexample1Report {
  int d = 0;
  int l = 0;
  double energy_cost = 0.0;
  double space_cost = 0.0;
  double product = 0.0;
  double entropy = 0.0;
  double bound_rhs = 0.0;
  double violation_ratio = 0.0;  // bound_rhs / product
  bool holds = false;
  // Reduced form ½(dl + l + 1) ≥ dl; kept for comparison, it does not follow
  // from the cost formulas above.
  double printed_lhs = 0.0;
  double printed_rhs = 0.0;
};

/// Uniform mixture of all d-dimensional oscillator eigenstates with every
/// quantum number ≤ l.
inline Counterexample1Report counterexample1(const OscillatorParams& p, int d, int l) {
  p.validate();
  if (d < 1 || l < 1) throw ValidationError("counterexample1: need d >= 1 and l >= 1");
  Counterexample1Report r;
  r.d = d;
  r.l = l;
  const double dd = d, ll = l;
  r.energy_cost = 0.5 * p.hbar * p.omega * dd * ll;
  r.space_cost = p.length_sq() * (dd * ll + dd + 1.0);
  r.product = r.energy_cost * r.space_cost;
  r.entropy = dd * std::log(ll + 1.0);
  // e^{S/d} − 1 = l exactly.
  r.bound_rhs = p.bound_scale() * dd * dd * ll * ll;
  r.violation_ratio = r.bound_rhs / r.product;
  r.holds = r.product >= r.bound_rhs;
  r.printed_lhs = 0.5 * (dd * ll + ll + 1.0);
  r.printed_rhs = dd * ll;
  return r;
}

struct Counterexample2Report {
  double p = 0.0;
  double entropy = 0.0;
  double f = 0.0;  // bound side
  double g = 0.0;  // cost side
  double ratio = 0.0;
};

/// ρ(p) = (1−p)|φ₀⟩⟨φ₀| + p|φ₁⟩⟨φ₁| for the 1-d oscillator.
inline Counterexample2Report counterexample2(const OscillatorParams& params, double p) {
  params.validate();
  if (!(p > 0.0) || p > 1.0) throw ValidationError("counterexample2: p must lie in (0, 1]");
  Counterexample2Report r;
  r.p = p;
  r.entropy = (p == 1.0) ? 0.0 : -p * std::log(p) - (1.0 - p) * std::log1p(-p);
  const double e = std::expm1(r.entropy);
  r.f = params.bound_scale() * e * e;
  r.g = params.bound_scale() * (2.0 * p * p + p);
  r.ratio = r.f / r.g;
  return r;
}

}  // namespace entrobound
