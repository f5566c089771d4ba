#pragma once

// Spectral bookkeeping for the pseudo-harmonic Hamiltonian with energies
// E(n,l) = 2n + √(l(l+d−2)) and degeneracies g(l): truncated partition sums,
// mean energies and entropies, and the quality of the Z_l ≈ 2β^{−(d−1)}
// approximation.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "entrobound/errors.hpp"

namespace entrobound {

struct SpectrumParams {
  int d = 3;
  double beta = 0.5;
  // Minimum truncation; sums grow past these until the tail is negligible.
  long l_max = 1;
  long n_max = 1;
  long max_terms = 20'000'000;

  void validate() const {
    if (d < 3) throw ValidationError("SpectrumParams: d must be >= 3");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("SpectrumParams: beta must lie in (0, 1)");
    if (l_max < 1 || n_max < 1) throw ValidationError("SpectrumParams: truncations must be >= 1");
  }
};

inline double eigen_energy(long n, long l, int d) {
  if (d < 3) throw ValidationError("eigen_energy: d must be >= 3");
  if (n < 0 || l < 0) throw ValidationError("eigen_energy: quantum numbers must be non-negative");
  return 2.0 * n + std::sqrt(static_cast<double>(l) * static_cast<double>(l + d - 2));
}

/// log g(l) = log(d+2l−2) + log((d+l−3)!) − log(l!) − log((d−2)!).
inline double log_degeneracy(long l, int d) {
  if (d < 3) throw ValidationError("degeneracy: d must be >= 3");
  if (l < 0) throw ValidationError("degeneracy: l must be non-negative");
  const double dl = static_cast<double>(l);
  return std::log(d + 2.0 * dl - 2.0) + std::lgamma(d + dl - 2.0) - std::lgamma(dl + 1.0) - std::lgamma(d - 1.0);
}

/// g(l), rounded to the nearest integer whenever that is representable.
inline double degeneracy(long l, int d) {
  const double v = std::exp(log_degeneracy(l, d));
  if (v >= 9007199254740992.0) return v;  // beyond 2^53 integrality is not observable
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-6 * std::max(1.0, v)) {
    std::ostringstream os;
    os.precision(17);
    os << "degeneracy: non-integral value " << v << " for l=" << l << ", d=" << d;
    throw NumericError(os.str());
  }
  return r;
}

struct PartitionCosts {
  double z_n = 0.0, z_l = 0.0;
  double log_z_l = 0.0;
  double u_n = 0.0, u_l = 0.0;
  double s_n = 0.0, s_l = 0.0;
  long n_terms = 0, l_terms = 0;
  // Closed forms for the n-sector.
  double z_n_closed = 0.0, u_n_closed = 0.0, s_n_closed = 0.0;
};

namespace detail {

/// Log terms of a unimodal positive series, extended until the tail bound
/// term·r/(1−r) is below `rel_tol` of the partial sum (r = current ratio).
template <class LogTerm>
std::vector<double> collect_log_terms(LogTerm&& log_term, long min_terms, long max_terms, double rel_tol,
                                      const char* what) {
  std::vector<double> out;
  double log_sum = -INFINITY;
  for (long k = 0;; ++k) {
    if (k >= max_terms) {
      std::ostringstream os;
      os << what << ": tail bound not reached within " << max_terms << " terms";
      throw TruncationError(os.str());
    }
    const double lt = log_term(k);
    out.push_back(lt);
    log_sum = (log_sum == -INFINITY) ? lt : std::max(log_sum, lt) + std::log1p(std::exp(-std::abs(log_sum - lt)));
    if (k + 1 < min_terms || k < 2) continue;
    const double log_ratio = lt - out[k - 1];
    if (log_ratio >= 0.0) continue;  // still rising
    const double r = std::exp(log_ratio);
    const double log_tail = lt + std::log(r / (1.0 - r));
    if (log_tail - log_sum < std::log(rel_tol)) break;
  }
  return out;
}

}  // namespace detail

inline PartitionCosts partition_and_costs(const SpectrumParams& params) {
  params.validate();
  const double beta = params.beta;
  const int d = params.d;
  PartitionCosts pc;

  // n-sector: Σ e^{−2βn}.
  {
    const auto lt = detail::collect_log_terms([&](long n) { return -2.0 * beta * n; }, params.n_max + 1,
                                              params.max_terms, 1e-17, "partition_and_costs (n-sum)");
    double z = 0.0, e = 0.0;
    for (std::size_t n = 0; n < lt.size(); ++n) {
      const double t = std::exp(lt[n]);
      z += t;
      e += 2.0 * n * t;
    }
    double s = 0.0;
    for (std::size_t n = 0; n < lt.size(); ++n) {
      const double p = std::exp(lt[n]) / z;
      if (p > 0.0) s -= p * (lt[n] - std::log(z));
    }
    pc.z_n = z;
    pc.u_n = e / z;
    pc.s_n = s;
    pc.n_terms = static_cast<long>(lt.size());
  }

  // l-sector: Σ g(l) e^{−β√(l(l+d−2))}, accumulated relative to the largest term.
  {
    const auto lt = detail::collect_log_terms(
        [&](long l) { return log_degeneracy(l, d) - beta * eigen_energy(0, l, d); }, params.l_max + 1,
        params.max_terms, 1e-17, "partition_and_costs (l-sum)");
    double top = -INFINITY;
    for (double v : lt) top = std::max(top, v);
    double z = 0.0, e = 0.0;
    for (std::size_t l = 0; l < lt.size(); ++l) {
      const double t = std::exp(lt[l] - top);
      z += t;
      e += t * eigen_energy(0, static_cast<long>(l), d);
    }
    pc.log_z_l = top + std::log(z);
    pc.z_l = std::exp(pc.log_z_l);
    pc.u_l = e / z;
    // −Σ_states p log p, p = e^{−βE_l}/Z_l for each of the g(l) states.
    double s = 0.0;
    for (std::size_t l = 0; l < lt.size(); ++l) {
      const double w = std::exp(lt[l] - top) / z;  // g(l)·p_l
      const double log_p = -beta * eigen_energy(0, static_cast<long>(l), d) - pc.log_z_l;
      s -= w * log_p;
    }
    pc.s_l = s;
    pc.l_terms = static_cast<long>(lt.size());
  }

  pc.z_n_closed = -1.0 / std::expm1(-2.0 * beta);
  pc.u_n_closed = 2.0 / std::expm1(2.0 * beta);
  pc.s_n_closed = std::log1p(pc.u_n_closed / 2.0) + (pc.u_n_closed / 2.0) * std::log1p(2.0 / pc.u_n_closed);
  return pc;
}

/// Σ_{n,l} g(l) e^{−βE(n,l)} by direct double summation over the rectangle
/// fixed by the single-sector truncations; returns its logarithm.
inline double log_total_partition_sum(const SpectrumParams& params) {
  const auto pc = partition_and_costs(params);
  double top = -INFINITY;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(pc.n_terms * pc.l_terms));
  for (long n = 0; n < pc.n_terms; ++n)
    for (long l = 0; l < pc.l_terms; ++l) {
      const double v = log_degeneracy(l, params.d) - params.beta * eigen_energy(n, l, params.d);
      terms.push_back(v);
      top = std::max(top, v);
    }
  double z = 0.0;
  for (double v : terms) z += std::exp(v - top);
  return top + std::log(z);
}

/// |log Z_l − log(2β^{−(d−1)})|.
inline double steepest_descent_error(const SpectrumParams& params) {
  const auto pc = partition_and_costs(params);
  return std::abs(pc.log_z_l - (std::log(2.0) - (params.d - 1) * std::log(params.beta)));
}

}  // namespace entrobound
