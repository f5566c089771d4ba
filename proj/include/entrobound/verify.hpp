#pragma once

// Seeded invariant suite driving the matfun, discrete_qm, gibbs and
// asymptotics properties. Output contains no timing so that runs with the
// same seed are byte-identical.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrobound/asymptotics.hpp"
#include "entrobound/gibbs.hpp"
#include "entrobound/max_entropy_oracle.hpp"
#include "entrobound/random.hpp"

namespace entrobound {

struct VerifyOptions {
  int dim = 6;
  std::uint64_t seed = 42;
  int trials = 20;
};

struct InvariantResult {
  std::string module;
  std::string name;
  bool skipped = false;
  bool passed = true;
  int cases = 0;
  double worst = 0.0;  // largest observed error measure
  double tolerance = 0.0;
  std::string note;
};

struct VerifySummary {
  VerifyOptions options;
  std::vector<InvariantResult> results;

  bool all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.skipped || r.passed; });
  }
};

namespace detail {

/// Runs `body(rng)` `cases` times; body returns an error measure compared
/// with `tol`, or throws, which counts as a failure.
inline InvariantResult check(const std::string& module, const std::string& name, std::uint64_t seed,
                             std::uint64_t salt, int cases, double tol, const std::function<double(Rng&)>& body) {
  InvariantResult r{module, name, false, true, 0, 0.0, tol, ""};
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  Rng rng(seq);
  for (int k = 0; k < cases; ++k) {
    ++r.cases;
    try {
      const double e = body(rng);
      if (!(e <= tol)) r.passed = false;
      if (!(e <= r.worst)) r.worst = std::isnan(e) ? INFINITY : e;
    } catch (const std::exception& ex) {
      r.passed = false;
      r.worst = INFINITY;
      if (r.note.empty()) r.note = ex.what();
    }
  }
  return r;
}

}  // namespace detail

inline VerifySummary run_verify(const VerifyOptions& opt) {
  if (opt.dim < 2) throw ValidationError("verify: dim must be >= 2");
  if (opt.trials < 1) throw ValidationError("verify: trials must be >= 1");
  VerifySummary out{opt, {}};
  const Index d = opt.dim;
  const int n = opt.trials;
  std::uint64_t salt = 0;
  auto add = [&](const std::string& m, const std::string& name, int cases, double tol,
                 const std::function<double(Rng&)>& body) {
    out.results.push_back(detail::check(m, name, opt.seed, ++salt, cases, tol, body));
  };

  // matfun
  add("matfun", "eigh_reconstruction", n, 1e-10, [&](Rng& rng) {
    const auto a = random_hermitian<cplx>(d, rng);
    return max_abs(eigh(a).reconstruct() - a.matrix()) / (1.0 + max_abs(a.matrix()));
  });
  add("matfun", "eigh_unitarity", n, 1e-10, [&](Rng& rng) { return eigh(random_hermitian<cplx>(d, rng)).unitarity_violation(); });
  add("matfun", "exp_log_roundtrip", n, 1e-9, [&](Rng& rng) {
    const auto a = random_hermitian<cplx>(d, rng, 0.5);
    const auto e = matrix_function(a, [](double x) { return std::exp(x); });
    const auto l = matrix_function(e, [](double x) { return std::log(x); });
    return max_abs(l.matrix() - a.matrix());
  });
  add("matfun", "entropy_range", n, 1e-12, [&](Rng& rng) {
    const auto rho = random_density<cplx>(d, rng, 0.0);
    const double s = entropy(rho);
    return std::max({0.0, -s, s - std::log(static_cast<double>(d))});
  });
  add("matfun", "entropy_unitary_invariance", n, 1e-10, [&](Rng& rng) {
    const auto rho = random_density<cplx>(d, rng);
    const MatrixXc u = random_unitary<cplx>(d, rng);
    const DensityMatrix<cplx> rotated(HermitianMatrix<cplx>(MatrixXc(u * rho.matrix() * u.adjoint()), 1e-10));
    return std::abs(entropy(rotated) - entropy(rho));
  });
  add("matfun", "relative_entropy_nonnegative", n, 1e-10, [&](Rng& rng) {
    const auto a = random_density<cplx>(d, rng), b = random_density<cplx>(d, rng);
    return std::max(0.0, -relative_entropy(a, b)) + std::abs(relative_entropy(a, a));
  });
  add("matfun", "entropy_gradient_order", n, 0.5, [&](Rng& rng) {
    const auto rho = random_density<cplx>(d, rng);
    const auto v = random_traceless<cplx>(d, rng);
    const double e1 = entropy_gradient_check(rho, v, 1e-4), e2 = entropy_gradient_check(rho, v, 5e-5);
    if (e1 > 1e-7 || e1 < 1e-13) return e1 > 1e-7 ? INFINITY : 0.0;  // at rounding level the ratio says nothing
    return std::abs(e1 / e2 - 4.0);
  });

  // discrete_qm
  const int odd = static_cast<int>(d) | 1;
  add("discrete_qm", "translation_is_exp_minus_iP", 1, 1e-8, [&](Rng&) {
    const QSystem sys({odd, {}, KineticSign::Positive});
    const MatrixXc e = spectral_map(sys.momentum(), [](double x) { return std::exp(cplx(0.0, -x)); });
    return max_abs(e - translation(odd));
  });
  add("discrete_qm", "boost_is_exp_i2piQ_over_d", 1, 1e-8, [&](Rng&) {
    const QSystem sys({odd, {}, KineticSign::Positive});
    const MatrixXc e = spectral_map(sys.position(), [&](double x) { return std::exp(cplx(0.0, 2.0 * std::numbers::pi * x / odd)); });
    return max_abs(e - boost(odd));
  });
  add("discrete_qm", "dft_unitary", 1, 1e-12, [&](Rng&) {
    const MatrixXc f = centered_dft(static_cast<int>(d));
    return max_abs(f.adjoint() * f - MatrixXc::Identity(d, d));
  });
  add("discrete_qm", "ground_energy_zero", n, 1e-10, [&](Rng& rng) {
    const QSystem sys(random_spec(static_cast<int>(d), rng));
    return std::abs(sys.energies()(0)) + std::abs(eigh(sys.hamiltonian()).eigenvalues.minCoeff());
  });
  add("discrete_qm", "parity_commutes_with_H", n, 1e-10, [&](Rng& rng) {
    const QSystem sys(random_spec(static_cast<int>(d), rng));
    const MatrixXr p = parity(static_cast<int>(d)).matrix();
    return max_abs(p * sys.hamiltonian().matrix() - sys.hamiltonian().matrix() * p) /
           (1.0 + max_abs(sys.hamiltonian().matrix()));
  });

  // gibbs
  add("gibbs", "stationarity", n, 1e-8, [&](Rng& rng) {
    const QSystem sys(random_spec(static_cast<int>(d), rng));
    const auto g = random_gibbs_parameters(sys, rng);
    return stationarity_residual(gibbs_state(sys, g.beta1, g.beta2), sys);
  });
  add("gibbs", "fast_costs_match_state", n, 1e-10, [&](Rng& rng) {
    const QSystem sys(random_spec(static_cast<int>(d), rng));
    const auto g = random_gibbs_parameters(sys, rng);
    const auto st = gibbs_state(sys, g.beta1, g.beta2);
    const double e = energy_cost(st.rho, sys), q = space_cost(st.rho, sys);
    return std::max({std::abs(e - st.energy_cost) / (1.0 + e), std::abs(q - st.space_cost) / (1.0 + q),
                     std::abs(entropy(st.rho) - st.entropy)});
  });
  add("gibbs", "relent_identity", n, 1e-8, [&](Rng& rng) {
    const auto rho = random_density<cplx>(d, rng);
    return energy_relent_identity_residual(rho, random_hermitian<cplx>(d, rng));
  });
  add("gibbs", "parity_symmetrization", n, 1e-10, [&](Rng& rng) {
    const QSystem sys(random_spec(static_cast<int>(d), rng));
    const auto rho = random_density<double>(d, rng);
    const auto sym = symmetrize(rho, parity(static_cast<int>(d)));
    const double gain = entropy(rho) - entropy(sym);  // ≤ 0 by concavity
    return std::max({0.0, gain, std::abs(energy_cost(sym, sys) - energy_cost(rho, sys)) / (1.0 + energy_cost(rho, sys)),
                     std::abs(space_cost(sym, sys) - space_cost(rho, sys)) / (1.0 + space_cost(rho, sys))});
  });
  if (d <= 8) {
    add("gibbs", "oracle_agreement", std::min(n, 10), 1e-3, [&](Rng& rng) {
      const QSystem sys(random_spec(static_cast<int>(d), rng));
      const auto g = random_gibbs_parameters(sys, rng, 6.0);
      const auto st = gibbs_state(sys, g.beta1, g.beta2);
      MaxEntropyOptions mo;
      mo.seed = rng();
      const auto rho = brute_force_max_entropy(sys, st.energy_cost, st.space_cost, mo);
      return trace_distance<cplx>(rho.matrix(), st.rho.to_complex().matrix());
    });
  } else {
    InvariantResult r{"gibbs", "oracle_agreement", true, true, 0, 0.0, 1e-3, "oracle limited to dim <= 8"};
    out.results.push_back(r);
    ++salt;
  }

  // asymptotics
  add("asymptotics", "degeneracy_d3", 1, 0.0, [&](Rng&) {
    double bad = 0.0;
    for (long l = 0; l <= 50; ++l) bad = std::max(bad, std::abs(degeneracy(l, 3) - (2.0 * l + 1.0)));
    return bad;
  });
  add("asymptotics", "n_sector_closed_forms", n, 1e-9, [&](Rng& rng) {
    std::uniform_real_distribution<double> ub(0.05, 0.95);
    const SpectrumParams sp{static_cast<int>(std::max<Index>(d, 3)), ub(rng), 1, 1};
    const auto pc = partition_and_costs(sp);
    return std::max({std::abs(pc.z_n / pc.z_n_closed - 1.0), std::abs(pc.u_n / pc.u_n_closed - 1.0),
                     std::abs(pc.s_n / pc.s_n_closed - 1.0)});
  });
  add("asymptotics", "partition_factorization", std::min(n, 5), 1e-10, [&](Rng& rng) {
    std::uniform_real_distribution<double> ub(0.3, 0.95);
    const SpectrumParams sp{3 + static_cast<int>(rng() % 3), ub(rng), 1, 1};
    const auto pc = partition_and_costs(sp);
    return std::abs(log_total_partition_sum(sp) - (std::log(pc.z_n) + pc.log_z_l));
  });
  add("asymptotics", "entropy_from_costs", n, 1e-9, [&](Rng& rng) {
    std::uniform_real_distribution<double> ub(0.1, 0.95);
    const SpectrumParams sp{3 + static_cast<int>(rng() % 6), ub(rng), 1, 1};
    const auto pc = partition_and_costs(sp);
    // S = βU + log Z for each sector.
    return std::max(std::abs(pc.s_l - (sp.beta * pc.u_l + pc.log_z_l)) / (1.0 + pc.s_l),
                    std::abs(pc.s_n - (sp.beta * pc.u_n + std::log(pc.z_n))) / (1.0 + pc.s_n));
  });
  return out;
}

inline nlohmann::ordered_json verify_to_json(const VerifySummary& s) {
  nlohmann::ordered_json inv = nlohmann::ordered_json::array();
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& r : s.results) {
    const char* status = r.skipped ? "skipped" : (r.passed ? "pass" : "fail");
    nlohmann::ordered_json j{{"module", r.module}, {"name", r.name},     {"status", status},
                             {"cases", r.cases},   {"tolerance", r.tolerance}};
    j["worst"] = std::isfinite(r.worst) ? nlohmann::ordered_json(r.worst) : nlohmann::ordered_json("inf");
    if (!r.note.empty()) j["note"] = r.note;
    inv.push_back(j);
    if (!r.skipped && !r.passed) failures.push_back(r.module + "." + r.name);
  }
  return {{"dim", s.options.dim},
          {"seed", s.options.seed},
          {"trials", s.options.trials},
          {"passed", s.all_passed()},
          {"invariants", inv},
          {"failures", failures}};
}

}  // namespace entrobound
