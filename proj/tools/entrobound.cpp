// entrobound command-line driver.
//
// Exit codes: 0 success, 1 invariant failure, 2 usage or input error,
// 3 empty result.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "entrobound/entrobound.hpp"

namespace eb = entrobound;

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kUsage = 2;
constexpr int kEmpty = 3;

struct ScanArgs {
  std::string config, out;
  std::optional<double> b1_lo, b1_hi, b2_lo, b2_hi, c_min, c_max;
  std::optional<int> b1_steps, b2_steps;
  int threads = 0;
  bool no_prune = false;
  bool quiet = false;
};

int cmd_scan(const ScanArgs& a) {
  eb::ScanConfig cfg = eb::load_config(a.config);
  if (a.b1_lo) cfg.beta1.lo = *a.b1_lo;
  if (a.b1_hi) cfg.beta1.hi = *a.b1_hi;
  if (a.b1_steps) cfg.beta1.steps = *a.b1_steps;
  if (a.b2_lo) cfg.beta2.lo = *a.b2_lo;
  if (a.b2_hi) cfg.beta2.hi = *a.b2_hi;
  if (a.b2_steps) cfg.beta2.steps = *a.b2_steps;
  if (a.c_min) cfg.window.c_min = *a.c_min;
  if (a.c_max) cfg.window.c_max = *a.c_max;
  if (a.threads > 0) cfg.parallelism = a.threads;
  if (a.no_prune) cfg.prune = false;
  cfg.validate();

  std::ofstream out(a.out);
  if (!out) throw eb::ValidationError("cannot write " + a.out);
  const auto res = eb::run_scan(cfg, [](const std::string& m) { std::cerr << "warning: " << m << '\n'; });
  eb::write_csv(out, res.points, cfg.window);
  out.close();
  if (!out) throw eb::ValidationError("failed writing " + a.out);

  long skipped = 0, in_window = 0;
  for (const auto& s : res.skips) skipped += s.count();
  for (const auto& p : res.points) in_window += cfg.window.contains(p.product);
  if (!a.quiet)
    std::cerr << "specs " << res.specs_built << "/" << cfg.specs.size() << ", evaluations " << res.evaluations
              << ", skipped " << skipped << ", in window " << in_window << ", failures " << res.failures.size()
              << '\n';
  if (!cfg.specs.empty() && res.specs_built == 0) {
    std::cerr << "error: no spec could be built\n";
    return kInvariantFailure;
  }
  return kOk;
}

int cmd_fit(const std::string& csv, double c_min, double c_max, const std::string& out) {
  const auto points = eb::load_csv(csv);
  eb::BoundFit fit;
  try {
    fit = eb::fit_alpha(points, {c_min, c_max});
  } catch (const eb::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEmpty;
  }
  auto j = eb::fit_to_json(fit);
  j["alpha_inverse"] = fit.alpha > 0.0 ? nlohmann::ordered_json(1.0 / fit.alpha) : nlohmann::ordered_json(nullptr);
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) {
    std::ofstream f(out);
    if (!(f << text)) throw eb::ValidationError("cannot write " + out);
  }
  return kOk;
}

int cmd_plot(const std::string& csv, const std::string& fit_path, const std::string& out) {
  const auto points = eb::load_csv(csv);
  std::optional<eb::BoundFit> fit;
  if (!fit_path.empty()) fit = eb::load_fit(fit_path);
  std::ofstream f(out);
  if (!f) throw eb::ValidationError("cannot write " + out);
  f << eb::render_svg(points, fit);
  if (!f) throw eb::ValidationError("failed writing " + out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-constrained energy/space cost bound toolkit"};
  app.require_subcommand(1, 1);

  ScanArgs scan;
  auto* sc = app.add_subcommand("scan", "Sweep (beta1, beta2) grids and write cost points as CSV");
  sc->add_option("--config", scan.config, "Scan config JSON")->required();
  sc->add_option("--out", scan.out, "Output CSV path")->required();
  sc->add_option("--beta1-lo", scan.b1_lo);
  sc->add_option("--beta1-hi", scan.b1_hi);
  sc->add_option("--beta1-steps", scan.b1_steps);
  sc->add_option("--beta2-lo", scan.b2_lo);
  sc->add_option("--beta2-hi", scan.b2_hi);
  sc->add_option("--beta2-steps", scan.b2_steps);
  sc->add_option("--c-min", scan.c_min);
  sc->add_option("--c-max", scan.c_max);
  sc->add_option("--threads", scan.threads, "Worker threads (default: ENTROBOUND_THREADS or all cores)");
  sc->add_flag("--no-prune", scan.no_prune, "Evaluate every grid point");
  sc->add_flag("--quiet", scan.quiet);

  std::string fit_csv, fit_out;
  double fit_cmin = 1.0, fit_cmax = 100.0;
  auto* fc = app.add_subcommand("fit", "Fit the minimal coefficient alpha of S = log(alpha sqrt(C) + 1)");
  fc->add_option("--csv", fit_csv)->required();
  fc->add_option("--c-min", fit_cmin);
  fc->add_option("--c-max", fit_cmax);
  fc->add_option("--out", fit_out, "Also write the JSON here");

  int ce1_d = 10, ce1_l = 10;
  eb::OscillatorParams osc;
  auto* c1 = app.add_subcommand("ce1", "Uniform mixture of oscillator eigenstates");
  c1->add_option("--d", ce1_d);
  c1->add_option("--l", ce1_l);
  double ce2_p = 0.5;
  auto* c2 = app.add_subcommand("ce2", "Two-level oscillator mixture");
  c2->add_option("--p", ce2_p);
  for (auto* c : {c1, c2}) {
    c->add_option("--hbar", osc.hbar);
    c->add_option("--mass", osc.mass);
    c->add_option("--omega", osc.omega);
  }

  eb::VerifyOptions vopt;
  auto* vc = app.add_subcommand("verify", "Run the seeded invariant suite");
  vc->add_option("--dim", vopt.dim);
  vc->add_option("--seed", vopt.seed);
  vc->add_option("--trials", vopt.trials);

  eb::SpectrumParams sp;
  auto* ac = app.add_subcommand("asym", "Partition sums of the pseudo-harmonic spectrum");
  ac->add_option("--d", sp.d);
  ac->add_option("--beta", sp.beta);
  ac->add_option("--l-max", sp.l_max);
  ac->add_option("--n-max", sp.n_max);

  std::string plot_csv, plot_fit, plot_out;
  auto* pc = app.add_subcommand("plot", "Render the scatter and fitted curve as SVG");
  pc->add_option("--csv", plot_csv)->required();
  pc->add_option("--fit", plot_fit, "Fit JSON from the fit subcommand");
  pc->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (sc->parsed()) return cmd_scan(scan);
    if (fc->parsed()) return cmd_fit(fit_csv, fit_cmin, fit_cmax, fit_out);
    if (c1->parsed()) {
      const auto r = eb::counterexample1(osc, ce1_d, ce1_l);
      nlohmann::ordered_json j{{"d", r.d},
                               {"l", r.l},
                               {"energy_cost", r.energy_cost},
                               {"space_cost", r.space_cost},
                               {"product", r.product},
                               {"entropy", r.entropy},
                               {"bound_rhs", r.bound_rhs},
                               {"violation_ratio", r.violation_ratio},
                               {"holds", r.holds},
                               {"reduced_lhs", r.printed_lhs},
                               {"reduced_rhs", r.printed_rhs}};
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (c2->parsed()) {
      const auto r = eb::counterexample2(osc, ce2_p);
      nlohmann::ordered_json j{{"p", r.p}, {"entropy", r.entropy}, {"f", r.f}, {"g", r.g}, {"ratio", r.ratio}};
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (vc->parsed()) {
      const auto s = eb::run_verify(vopt);
      std::cout << eb::verify_to_json(s).dump(2) << '\n';
      if (!s.all_passed()) {
        for (const auto& r : s.results)
          if (!r.skipped && !r.passed) std::cerr << "FAIL " << r.module << '.' << r.name << '\n';
        return kInvariantFailure;
      }
      return kOk;
    }
    if (ac->parsed()) {
      const auto r = eb::partition_and_costs(sp);
      nlohmann::ordered_json j{{"d", sp.d},
                               {"beta", sp.beta},
                               {"z_n", r.z_n},
                               {"z_l", r.z_l},
                               {"log_z_l", r.log_z_l},
                               {"u_n", r.u_n},
                               {"u_l", r.u_l},
                               {"s_n", r.s_n},
                               {"s_l", r.s_l},
                               {"u_n_closed", r.u_n_closed},
                               {"s_n_closed", r.s_n_closed},
                               {"n_terms", r.n_terms},
                               {"l_terms", r.l_terms},
                               {"steepest_descent_error", eb::steepest_descent_error(sp)}};
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (pc->parsed()) return cmd_plot(plot_csv, plot_fit, plot_out);
  } catch (const std::invalid_argument& e) {  // ValidationError, PreconditionError
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const eb::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEmpty;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariantFailure;
  }
  return kUsage;
}
