// Acceptance checks. Usage: acceptance [id...] with ids 1..11 and 9-ci;
// no arguments runs everything except the full-size 9. Prints one PASS/FAIL
// line per criterion, exit status 1 if any failed.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "entrobound/entrobound.hpp"

using namespace entrobound;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string config_path(const std::string& name) { return std::string(ENTROBOUND_CONFIGS) + "/" + name; }

// 1 -----------------------------------------------------------------------
Outcome counterexample1_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  for (int d = 1; d <= 20; ++d)
    for (int l = 1; l <= 20; ++l) {
      const auto r = counterexample1({}, d, l);
      worst = std::max({worst, std::abs(r.energy_cost - d * l / 2.0), std::abs(r.space_cost - (d * l + d + 1) / 2.0),
                        std::abs(r.entropy - d * std::log(l + 1.0))});
    }
  const double r100 = counterexample1({}, 100, 100).violation_ratio;
  bool monotone = true;
  double prev = 0.0, last = 0.0;
  for (int k = 1; k <= 1 << 20; k *= 2) {
    last = counterexample1({}, k, k).violation_ratio;
    monotone = monotone && last > prev && last < 2.0;
    prev = last;
  }
  const double t = seconds_since(t0);
  o.pass = worst <= 1e-12 && std::abs(r100 - 20000.0 / 10101.0) <= 1e-12 && monotone && 2.0 - last < 1e-5 && t < 1.0;
  o.detail = "max closed-form error " + fmt(worst) + ", ratio(100,100)=" + fmt(r100, 12) +
             ", ratio(2^20,2^20)=" + fmt(last, 10) + (monotone ? ", monotone" : ", NOT monotone") + ", " + fmt(t, 3) +
             "s";
  return o;
}

// 2 -----------------------------------------------------------------------
Outcome counterexample2_ratio() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const double half = counterexample2({}, 0.5).ratio, one = counterexample2({}, 1.0).ratio;
  std::string small;
  for (double p : {1e-2, 1e-3, 1e-4}) small += " ratio(" + fmt(p) + ")=" + fmt(counterexample2({}, p).ratio);
  const double t = seconds_since(t0);
  o.pass = std::abs(half - 1.0) <= 1e-12 && one == 0.0 && t < 1.0;
  o.detail = "ratio(0.5)=" + fmt(half, 17) + ", ratio(1)=" + fmt(one) + ";" + small +
             " (decreasing towards 0 as p->0, not +inf)";
  return o;
}

// 3 -----------------------------------------------------------------------
Outcome gibbs_stationarity() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Rng rng(3003);
  double worst = 0.0;
  int n = 0;
  for (int d : {4, 8, 16})
    for (int k = 0; k < 100; ++k, ++n) {
      const QSystem sys(random_spec(d, rng));
      const auto p = random_gibbs_parameters(sys, rng);
      worst = std::max(worst, stationarity_residual(gibbs_state(sys, p.beta1, p.beta2), sys));
    }
  const double t = seconds_since(t0);
  o.pass = worst <= 1e-8 && t < 10.0;
  o.detail = std::to_string(n) + " draws, worst residual " + fmt(worst) + ", " + fmt(t, 3) + "s";
  return o;
}

// 4 -----------------------------------------------------------------------
Outcome oracle_recovers_gibbs() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Rng rng(4004);
  double worst = 0.0;
  int failures = 0;
  for (int d : {4, 6})
    for (int k = 0; k < 10; ++k) {
      const QSystem sys(random_spec(d, rng));
      const auto p = random_gibbs_parameters(sys, rng);
      const auto g = gibbs_state(sys, p.beta1, p.beta2);
      MaxEntropyOptions mo;
      mo.seed = rng();
      try {
        const auto rho = brute_force_max_entropy(sys, g.energy_cost, g.space_cost, mo);
        worst = std::max(worst, trace_distance<cplx>(rho.matrix(), g.rho.to_complex().matrix()));
      } catch (const std::exception& e) {
        ++failures;
        o.detail += std::string("[") + e.what() + "] ";
      }
    }
  const double t = seconds_since(t0);
  o.pass = failures == 0 && worst <= 1e-3 && t < 120.0;
  o.detail += "20 states, worst trace distance " + fmt(worst) + ", " + fmt(t, 3) + "s";
  return o;
}

// 5 -----------------------------------------------------------------------
Outcome entropy_gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Rng rng(5005);
  double worst = 0.0, rmin = INFINITY, rmax = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto rho = random_density<cplx>(6, rng);
    const auto v = random_traceless<cplx>(6, rng);
    const double e1 = entropy_gradient_check(rho, v, 1e-4), e2 = entropy_gradient_check(rho, v, 5e-5);
    worst = std::max(worst, e1);
    rmin = std::min(rmin, e1 / e2);
    rmax = std::max(rmax, e1 / e2);
  }
  const double t = seconds_since(t0);
  o.pass = worst <= 1e-7 && rmin >= 3.5 && rmax <= 4.5 && t < 5.0;
  o.detail = "50 cases, worst discrepancy " + fmt(worst) + ", halving ratio in [" + fmt(rmin, 4) + ", " +
             fmt(rmax, 4) + "], " + fmt(t, 3) + "s";
  return o;
}

// 6 -----------------------------------------------------------------------
Outcome operator_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  auto errors = [](int d) {
    const QSystem sys({d, {}});
    const MatrixXc et = spectral_map(sys.momentum(), [](double x) { return std::exp(cplx(0.0, -x)); });
    const MatrixXc eb =
        spectral_map(sys.position(), [&](double x) { return std::exp(cplx(0.0, 2.0 * std::numbers::pi * x / d)); });
    return std::pair{max_abs(et - translation(d)), max_abs(eb - boost(d))};
  };
  double worst_odd = 0.0, worst_even = 0.0;
  for (int d : {3, 5, 7, 9, 11}) {
    const auto [a, b] = errors(d);
    worst_odd = std::max({worst_odd, a, b});
  }
  for (int d : {2, 4, 6, 8, 10, 12}) {
    const auto [a, b] = errors(d);
    worst_even = std::max({worst_even, a, b});
  }
  const double t = seconds_since(t0);
  o.pass = worst_odd <= 1e-8 && t < 5.0;
  o.detail = "odd d worst " + fmt(worst_odd) + "; even d (recorded) worst " + fmt(worst_even) +
             (worst_even <= 1e-8 ? " (holds)" : " (deviates)") + ", " + fmt(t, 3) + "s";
  return o;
}

// 7 -----------------------------------------------------------------------
Outcome identity_chain() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Rng rng(7007);
  double worst_identity = 0.0;
  std::map<int, int> violations;
  std::map<int, int> both_negative;
  double worst_gap = 0.0;
  for (int d : {4, 8}) {
    violations[d] = 0;
    both_negative[d] = 0;
    for (int k = 0; k < 100; ++k) {
      const QSystem sys(random_spec(d, rng));
      const auto rho = random_density<cplx>(d, rng);
      worst_identity = std::max({worst_identity,
                                 energy_relent_identity_residual(rho, sys.hamiltonian().to_complex()),
                                 energy_relent_identity_residual(rho, sys.position_squared().to_complex())});
      const auto b = deadend_lower_bound(sys, rho);
      if (!b.holds()) {
        ++violations[d];
        worst_gap = std::max(worst_gap, b.rhs - b.lhs);
      }
      if (b.jensen_energy < 0.0 && b.jensen_space < 0.0) ++both_negative[d];
    }
  }
  const double t = seconds_since(t0);
  o.pass = worst_identity <= 1e-8 && violations[4] == 0 && violations[8] == 0 && t < 10.0;
  o.detail = "identity worst residual " + fmt(worst_identity) + "; lower-bound violations d=4: " +
             std::to_string(violations[4]) + "/100, d=8: " + std::to_string(violations[8]) +
             "/100 (both Jensen factors negative in " + std::to_string(both_negative[8]) +
             "/100 at d=8), largest rhs-lhs " + fmt(worst_gap) + ", " + fmt(t, 3) + "s";
  return o;
}

// 8 -----------------------------------------------------------------------
Outcome series_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  for (double beta : {0.1, 0.3, 0.5, 0.9}) {
    const auto pc = partition_and_costs({3, beta, 1, 1});
    const double u = 2.0 / std::expm1(2.0 * beta);
    const double s = std::log1p(u / 2.0) + (u / 2.0) * std::log1p(2.0 / u);
    worst = std::max({worst, std::abs(pc.u_n / u - 1.0), std::abs(pc.s_n / s - 1.0)});
  }
  bool deg = true;
  for (long l = 0; l <= 50; ++l) deg = deg && degeneracy(l, 3) == 2.0 * l + 1.0;
  const double t = seconds_since(t0);
  o.pass = worst <= 1e-9 && deg && t < 5.0;
  o.detail = "worst relative error " + fmt(worst) + ", degeneracy(l,3)=2l+1 " + (deg ? "holds" : "FAILS") +
             " for l<=50, " + fmt(t, 3) + "s";
  return o;
}

// 9 -----------------------------------------------------------------------
struct ScanRun {
  ScanConfig config;
  ScanResult result;
  BoundFit fit;
  double seconds = 0.0;
};

ScanRun scan_and_fit(const std::string& name, int threads) {
  ScanRun r;
  r.config = load_config(config_path(name));
  r.config.parallelism = threads;
  const auto t0 = std::chrono::steady_clock::now();
  r.result = run_scan(r.config);
  r.seconds = seconds_since(t0);
  r.fit = fit_alpha(r.result.points, r.config.window);
  return r;
}

std::string describe(const ScanRun& r) {
  std::ostringstream os;
  os << "alpha=" << fmt(r.fit.alpha, 8) << " (1/alpha=" << fmt(1.0 / r.fit.alpha, 6) << ") from "
     << r.fit.n_points << " in-window points, " << r.result.evaluations << " evaluations, " << fmt(r.seconds, 4)
     << "s";
  return os.str();
}

Outcome alpha_ci() {
  Outcome o;
  const auto neg = scan_and_fit("ci_d30.json", 1);
  const auto pos = scan_and_fit("ci_d30_positive.json", 1);
  o.pass = neg.fit.alpha >= 1.5 && neg.fit.alpha <= 3.0 && neg.seconds < 120.0;
  o.detail = "d=30, 60x40, H=-P^2/2+V: " + describe(neg) + "; with H=+P^2/2+V: alpha=" + fmt(pos.fit.alpha, 8);
  return o;
}

Outcome alpha_full() {
  Outcome o;
  const auto r = scan_and_fit("full_d50.json", 1);
  o.pass = r.fit.alpha >= 2.0 && r.fit.alpha <= 2.7 && r.seconds < 1800.0;
  o.detail = "d=50, 300x200, H=-P^2/2+V, single thread: " + describe(r);
  return o;
}

// 10 ----------------------------------------------------------------------
Outcome fit_properties() {
  Outcome o;
  std::vector<std::pair<std::string, ScanRun>> runs;
  for (const char* name : {"ci_d30.json", "ci_d30_positive.json", "small.json"})
    runs.emplace_back(name, scan_and_fit(name, 0));
  int checked = 0;
  for (const auto& [name, r] : runs) {
    const int viol = count_dominance_violations(r.result.points, r.config.window, r.fit.alpha);
    const int broken = count_dominance_violations(r.result.points, r.config.window, r.fit.alpha * (1.0 - 1e-6));
    ++checked;
    if (viol != 0 || broken == 0 || !is_minimal(r.fit)) o.pass = false;
    o.detail += name + std::string(": violations ") + std::to_string(viol) + ", shrunk-alpha violations " +
                std::to_string(broken) + "; ";
  }
  o.detail += std::to_string(checked) + " scans";
  return o;
}

// 11 ----------------------------------------------------------------------
struct Proc {
  int code = -1;
  std::string out;
};

Proc sh(const std::string& args) {
  const std::string cmd = std::string(ENTROBOUND_CLI) + " " + args + " 2>/dev/null";
  Proc r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("entrobound_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cfg = config_path("ci_d30.json");
  const auto a = sh("scan --quiet --threads 1 --config " + cfg + " --out " + (dir / "a.csv").string());
  const auto b = sh("scan --quiet --threads 1 --config " + cfg + " --out " + (dir / "b.csv").string());
  const auto c = sh("scan --quiet --threads 4 --config " + cfg + " --out " + (dir / "c.csv").string());
  const std::string ca = slurp(dir / "a.csv"), cb = slurp(dir / "b.csv"), cc = slurp(dir / "c.csv");
  const auto v1 = sh("verify --seed 42"), v2 = sh("verify --seed 42");
  fs::remove_all(dir);
  const bool scans_ok = a.code == 0 && b.code == 0 && c.code == 0 && !ca.empty() && ca == cb && ca == cc;
  const bool verify_ok = v1.code == 0 && !v1.out.empty() && v1.out == v2.out;
  o.pass = scans_ok && verify_ok;
  o.detail = "scan CSV (" + std::to_string(ca.size()) + " bytes) " + (scans_ok ? "identical" : "DIFFERS") +
             " across 2 single-thread runs and a 4-thread run; verify --seed 42 summary " +
             (verify_ok ? "identical" : "DIFFERS");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::pair<std::string, std::function<Outcome()>>>> all{
      {"1", {"counterexample 1 closed forms", counterexample1_closed_forms}},
      {"2", {"counterexample 2 ratio", counterexample2_ratio}},
      {"3", {"Gibbs stationarity", gibbs_stationarity}},
      {"4", {"max-entropy oracle recovers Gibbs states", oracle_recovers_gibbs}},
      {"5", {"entropy gradient", entropy_gradient}},
      {"6", {"operator identities", operator_identities}},
      {"7", {"relative-entropy identity chain", identity_chain}},
      {"8", {"series identities", series_identities}},
      {"9-ci", {"alpha reproduction, CI scale", alpha_ci}},
      {"9", {"alpha reproduction, d=50", alpha_full}},
      {"10", {"fit dominance and minimality", fit_properties}},
      {"11", {"determinism", determinism}},
  };
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);
  if (ids.empty())
    for (const auto& [id, _] : all)
      if (id != "9") ids.push_back(id);

  int failed = 0;
  for (const auto& id : ids) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& e) { return e.first == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << it->second.first << "): " << o.detail
              << std::endl;
  }
  return failed ? 1 : 0;
}
