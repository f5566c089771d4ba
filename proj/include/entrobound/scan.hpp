#pragma once

// Grid sweep over (β₁, β₂) for a list of Hamiltonians, with per-row dynamic
// termination, and the minimal dominating curve S = log(α√C + 1).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "entrobound/discrete_qm.hpp"
#include "entrobound/gibbs.hpp"

namespace entrobound {

/// `steps` equally spaced samples over [lo, hi], endpoints included.
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  double at(int i) const {
    if (i == steps - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  void validate(const char* name) const {
    if (steps < 2) throw ValidationError(std::string(name) + ": steps must be >= 2");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw ValidationError(std::string(name) + ": need finite lo < hi");
  }
};

struct CostWindow {
  double c_min = 1.0;
  double c_max = 100.0;

  bool contains(double c) const { return c >= c_min && c <= c_max; }
  void validate() const {
    if (!(c_min > 0.0 && c_min < c_max)) throw ValidationError("cost window: need 0 < c_min < c_max");
  }
};

struct ScanConfig {
  std::vector<HamiltonianSpec> specs;
  GridAxis beta1{-5.0, 5.0, 300};
  GridAxis beta2{-0.5, 2.0, 200};
  CostWindow window{};
  int parallelism = 0;  // 0: ENTROBOUND_THREADS, else hardware concurrency
  bool prune = true;

  void validate() const {
    beta1.validate("beta1 range");
    beta2.validate("beta2 range");
    window.validate();
  }
};

struct CostPoint {
  int spec_id = 0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double entropy = 0.0;
  double energy_cost = 0.0;
  double space_cost = 0.0;
  double product = 0.0;
};

enum class SkipReason { BelowWindow, AboveWindow };

inline const char* to_string(SkipReason r) { return r == SkipReason::BelowWindow ? "below_window" : "above_window"; }

/// Indices [first, last] along β₂ of row `row` were not evaluated because of
/// the product observed at `trigger`.
struct SkipRecord {
  int spec_id = 0;
  int row = 0;
  int first = 0;
  int last = 0;
  int trigger = 0;
  double trigger_product = 0.0;
  SkipReason reason = SkipReason::BelowWindow;

  int count() const { return last - first + 1; }
};

struct ScanFailure {
  int spec_id = 0;
  int row = -1;  // −1: the spec itself could not be built
  int column = -1;
  std::string message;
};

struct ScanResult {
  std::vector<CostPoint> points;  // every evaluated point, canonical order
  std::vector<SkipRecord> skips;
  std::vector<ScanFailure> failures;
  long evaluations = 0;
  int specs_built = 0;
};

/// Outcome of walking one row: products are indexed by column, empty where
/// the point was skipped or failed.
struct RowWalk {
  std::vector<std::optional<double>> products;
  std::vector<int> failed;
  std::vector<SkipRecord> skips;
  int evaluations = 0;
};

/// Walks `n` columns in increasing β₂. `eval(j)` returns the product at
/// column j, or nullopt on numeric failure. With pruning, columns past the
/// first product < c_min are skipped; when both leading columns exceed
/// c_max, the first column ≤ c_max is located by bisection and the columns
/// before it are skipped. Both rules assume the product decreases along the
/// row.
template <class Eval>
RowWalk walk_row(int n, const CostWindow& window, bool prune, Eval&& eval) {
  RowWalk w;
  w.products.assign(static_cast<std::size_t>(n), std::nullopt);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  auto get = [&](int j) -> std::optional<double> {
    if (!done[j]) {
      done[j] = 1;
      ++w.evaluations;
      w.products[j] = eval(j);
      if (!w.products[j]) w.failed.push_back(j);
    }
    return w.products[j];
  };

  int start = 0;
  if (prune && n >= 3) {
    const auto p0 = get(0);
    const auto p1 = p0 && *p0 > window.c_max ? get(1) : std::nullopt;
    if (p0 && p1 && *p0 > window.c_max && *p1 > window.c_max) {
      int lo = 1, hi = n - 1;
      const auto ph = get(hi);
      if (ph && *ph > window.c_max) {
        if (hi - lo > 1) w.skips.push_back({0, 0, lo + 1, hi - 1, 1, *p1, SkipReason::AboveWindow});
        start = n;  // nothing left to visit
      } else if (!ph) {
        start = 2;  // numeric trouble: fall back to a linear walk
      } else {
        bool bisect_ok = true;
        while (hi - lo > 1) {
          const int mid = lo + (hi - lo) / 2;
          const auto pm = get(mid);
          if (!pm) {
            bisect_ok = false;
            break;
          }
          (*pm > window.c_max ? lo : hi) = mid;
        }
        if (bisect_ok) {
          // Columns in (1, hi) that the bisection did not touch are skipped.
          int j = 2;
          while (j < hi) {
            if (done[j]) {
              ++j;
              continue;
            }
            int k = j;
            while (k + 1 < hi && !done[k + 1]) ++k;
            w.skips.push_back({0, 0, j, k, 1, *p1, SkipReason::AboveWindow});
            j = k + 1;
          }
          start = hi;
        } else {
          start = 2;
        }
      }
    }
  }

  for (int j = start; j < n; ++j) {
    const auto p = get(j);
    if (prune && p && *p < window.c_min) {
      // Later entries may already be known from the bisection.
      int k = j + 1;
      while (k < n) {
        if (done[k]) {
          ++k;
          continue;
        }
        int e = k;
        while (e + 1 < n && !done[e + 1]) ++e;
        w.skips.push_back({0, 0, k, e, j, *p, SkipReason::BelowWindow});
        k = e + 1;
      }
      break;
    }
  }
  std::sort(w.failed.begin(), w.failed.end());
  return w;
}

inline int resolve_threads(int hint) {
  if (hint > 0) return hint;
  if (const char* env = std::getenv("ENTROBOUND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

using LogSink = std::function<void(const std::string&)>;

inline ScanResult run_scan(const ScanConfig& config, const LogSink& log = {}) {
  config.validate();
  std::mutex log_mutex;
  auto emit = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    log(msg);
  };

  ScanResult result;
  const int n_specs = static_cast<int>(config.specs.size());
  std::vector<std::optional<QSystem>> systems(static_cast<std::size_t>(n_specs));
  for (int s = 0; s < n_specs; ++s) {
    try {
      systems[s].emplace(config.specs[s]);
      ++result.specs_built;
    } catch (const std::exception& e) {
      result.failures.push_back({s, -1, -1, "spec " + config.specs[s].label() + ": " + e.what()});
      emit(result.failures.back().message);
    }
  }

  struct Task {
    int spec;
    int row;
  };
  std::vector<Task> tasks;
  for (int s = 0; s < n_specs; ++s)
    if (systems[s])
      for (int i = 0; i < config.beta1.steps; ++i) tasks.push_back({s, i});

  struct RowOut {
    std::vector<CostPoint> points;
    std::vector<SkipRecord> skips;
    std::vector<ScanFailure> failures;
    int evaluations = 0;
  };
  std::vector<RowOut> outs(tasks.size());

  auto run_task = [&](std::size_t t) {
    const auto [s, i] = tasks[t];
    const QSystem& sys = *systems[s];
    const double b1 = config.beta1.at(i);
    const int n = config.beta2.steps;
    std::vector<std::optional<CostPoint>> cells(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    auto eval = [&](int j) -> std::optional<double> {
      const double b2 = config.beta2.at(j);
      try {
        const auto c = gibbs_costs(sys, b1, b2);
        cells[j] = CostPoint{s, b1, b2, c.entropy, c.energy_cost, c.space_cost, c.product};
        return c.product;
      } catch (const std::exception& e) {
        errors[j] = e.what();
        return std::nullopt;
      }
    };
    auto walk = walk_row(n, config.window, config.prune, eval);
    RowOut& out = outs[t];
    out.evaluations = walk.evaluations;
    for (int j = 0; j < n; ++j)
      if (cells[j]) out.points.push_back(*cells[j]);
    for (auto sk : walk.skips) {
      sk.spec_id = s;
      sk.row = i;
      out.skips.push_back(sk);
    }
    for (int j : walk.failed) {
      std::ostringstream os;
      os.precision(17);
      os << "spec " << s << " point (beta1=" << b1 << ", beta2=" << config.beta2.at(j) << ") skipped: " << errors[j];
      out.failures.push_back({s, i, j, os.str()});
      emit(os.str());
    }
  };

  const int threads = std::min<int>(resolve_threads(config.parallelism), std::max<std::size_t>(1, tasks.size()));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) run_task(t);
      });
    for (auto& th : pool) th.join();
  }

  for (auto& o : outs) {
    result.points.insert(result.points.end(), o.points.begin(), o.points.end());
    result.skips.insert(result.skips.end(), o.skips.begin(), o.skips.end());
    result.failures.insert(result.failures.end(), o.failures.begin(), o.failures.end());
    result.evaluations += o.evaluations;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Fitting

struct BoundFit {
  double alpha = 0.0;
  CostPoint attaining_point;
  CostWindow window;
  int n_points = 0;
};

/// e^S − 1 ≤ α√C, i.e. S ≤ log(α√C + 1).
inline double dominating_entropy(double alpha, double product) {
  return std::log1p(alpha * std::sqrt(std::max(product, 0.0)));
}

/// α = max over in-window points of (e^S − 1)/√C; the first maximizer wins.
inline BoundFit fit_alpha(const std::vector<CostPoint>& points, const CostWindow& window) {
  window.validate();
  BoundFit fit;
  fit.window = window;
  bool any = false;
  for (const auto& p : points) {
    if (!window.contains(p.product)) continue;
    ++fit.n_points;
    const double a = std::expm1(p.entropy) / std::sqrt(p.product);
    if (!any || a > fit.alpha) {
      fit.alpha = a;
      fit.attaining_point = p;
      any = true;
    }
  }
  if (!any) throw EmptyInputError("fit_alpha: no points inside the cost window");
  fit.alpha = std::max(fit.alpha, 0.0);
  return fit;
}

/// Number of in-window points strictly above the curve, up to `tol`.
inline int count_dominance_violations(const std::vector<CostPoint>& points, const CostWindow& window, double alpha,
                                      double tol = 1e-12) {
  int bad = 0;
  for (const auto& p : points)
    if (window.contains(p.product) && p.entropy > dominating_entropy(alpha, p.product) + tol) ++bad;
  return bad;
}

/// True when shrinking α by the relative amount `rel` leaves the attaining
/// point above the curve.
inline bool is_minimal(const BoundFit& fit, double rel = 1e-6) {
  if (fit.alpha == 0.0) return fit.attaining_point.entropy == 0.0;
  const auto& p = fit.attaining_point;
  return p.entropy > dominating_entropy(fit.alpha * (1.0 - rel), p.product);
}

/// (e^S/α − 1)², floored at 0 inside the square.
inline double candidate_bound(double s, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("candidate_bound: alpha must be positive");
  const double arg = std::max(0.0, std::exp(s) / alpha - 1.0);
  return arg * arg;
}

}  // namespace entrobound
