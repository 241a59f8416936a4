#pragma once

// Experiment drivers: trajectory runs, convergence studies against reference
// solutions, variational-order studies against the exact discrete
// Lagrangian, long-run energy tracking, and work-precision measurement.
// All drivers are deterministic given the same configuration; work-precision
// wall times are the one reported quantity that is not.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hem/errors.hpp"
#include "hem/integrator.hpp"
#include "hem/linalg.hpp"
#include "hem/oracle.hpp"
#include "hem/systems.hpp"

namespace hem {

struct ExperimentConfig {
  std::string system = "sho";
  std::string method = "hem";
  int n = 3;
  int m = -1;
  Vec q0{1.0};
  Vec p0{0.0};
  double h = 0.0;
  Vec h_list;
  int steps = 0;
  double t_end = 0.0;
  std::string out;
  bool plot = false;
  double tol = 1e-12;
  std::string component = "qp";  // error component for convergence: qp | q | p

  MethodConfig method_config() const {
    MethodConfig cfg;
    cfg.method = method_from_name(method);
    cfg.n = n;
    cfg.m = m;
    cfg.tol = tol;
    cfg.colloc.tol = tol;
    cfg.validate();
    return cfg;
  }

  int resolve_steps(double step) const {
    if (steps > 0) return steps;
    if (t_end > 0.0) {
      const int k = static_cast<int>(std::llround(t_end / step));
      if (k < 1) throw UsageError("t-end shorter than one step");
      return k;
    }
    throw UsageError("either steps or t-end is required");
  }

  void require_h_list() const {
    if (h_list.size() < 3) throw UsageError("h-list with at least 3 entries required");
    for (size_t i = 1; i < h_list.size(); ++i)
      if (h_list[i] >= h_list[i - 1]) throw UsageError("h-list must be strictly decreasing");
  }
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |log e - fit| over the points
  bool asymptotic = true;     // max_residual <= 0.1
};

/// Least-squares slope of log(err) against log(h).
inline SlopeFit fit_loglog(const Vec& hs, const Vec& errs) {
  if (hs.size() != errs.size() || hs.size() < 2) throw UsageError("fit_loglog: need matching lists, >= 2 points");
  const size_t n = hs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (hs[i] <= 0.0 || errs[i] <= 0.0) throw UsageError("fit_loglog: positive data required");
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(errs[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (size_t i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(ly[i] - (fit.intercept + fit.slope * lx[i])));
  fit.asymptotic = fit.max_residual <= 0.1;
  return fit;
}

struct ConvergenceReport {
  std::vector<std::pair<double, double>> rows;  // (h, error)
  SlopeFit fit;
  std::string system, method, component;
};

namespace detail {

/// Final-time reference state: analytic for the oscillator, fine-step gauss2
/// otherwise (h_ref = h_min/100).
template <class Sys>
PhasePoint final_reference(const Sys& sys, const PhasePoint& initial, double t_end, double h_min) {
  if (sys.name() == "sho") return sho_flow(initial, t_end);
  const int steps = static_cast<int>(std::llround((t_end - initial.t) / (h_min / 100.0)));
  return reference_state(sys, initial, t_end, std::max(steps, 1));
}

inline double phase_error(const PhasePoint& a, const PhasePoint& b, const std::string& component) {
  double s = 0.0;
  if (component == "qp" || component == "q")
    for (size_t i = 0; i < a.q.size(); ++i) s += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]);
  if (component == "qp" || component == "p")
    for (size_t i = 0; i < a.p.size(); ++i) s += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  return std::sqrt(s);
}

}  // namespace detail

/// Global phase-space error at t_end over the h-list, with log-log slope.
template <class Sys>
ConvergenceReport converge_study(const Sys& sys, const ExperimentConfig& cfg) {
  cfg.require_h_list();
  if (cfg.component != "qp" && cfg.component != "q" && cfg.component != "p")
    throw UsageError("component must be qp, q, or p");
  const MethodConfig mc = cfg.method_config();
  const PhasePoint initial{cfg.q0, cfg.p0, 0.0};
  const double h_min = cfg.h_list.back();

  ConvergenceReport report;
  report.system = std::string(sys.name());
  report.method = mc.descriptor();
  report.component = cfg.component;
  Vec hs, errs;
  for (double h : cfg.h_list) {
    const int steps = cfg.resolve_steps(h);
    const double t_end = steps * h;
    const Trajectory traj = run(sys, mc, initial, h, steps);
    if (traj.truncated) throw SolverError("convergence run truncated: " + traj.failure, 0, 0.0);
    const PhasePoint ref = detail::final_reference(sys, initial, t_end, h_min);
    const double err = detail::phase_error(traj.points.back(), ref, cfg.component);
    report.rows.emplace_back(h, err);
    hs.push_back(h);
    errs.push_back(err);
  }
  report.fit = fit_loglog(hs, errs);
  return report;
}

/// |L_d - L_d^E| over the h-list with boundary data on the exact flow
/// through (q0, p0).
template <class Sys>
ConvergenceReport ldorder_study(const Sys& sys, const ExperimentConfig& cfg) {
  cfg.require_h_list();
  const int m = resolve_quadrature_terms(cfg.n, cfg.m);
  const PhasePoint initial{cfg.q0, cfg.p0, 0.0};
  const bool analytic = sys.name() == "sho";

  ConvergenceReport report;
  report.system = std::string(sys.name());
  report.method = "hem(" + std::to_string(cfg.n) + "," + std::to_string(m) + ")";
  report.component = "Ld";
  Vec hs, errs;
  for (double h : cfg.h_list) {
    const PhasePoint end = analytic ? sho_flow(initial, h) : reference_state(sys, initial, h, 1000);
    const LdEvaluation ld = eval_Ld(sys, cfg.n, m, h, initial.q, end.q);
    const double exact = analytic ? sho_exact_Ld(initial.q[0], end.q[0], h)
                                  : exact_Ld_oracle(sys, initial.q, end.q, h);
    const double err = std::abs(ld.value - exact);
    report.rows.emplace_back(h, err);
    hs.push_back(h);
    errs.push_back(err);
  }
  report.fit = fit_loglog(hs, errs);
  return report;
}

struct EnergyReport {
  std::vector<std::pair<double, double>> rows;  // (t, H - H0)
  double max_abs = 0.0;
  double drift_slope = 0.0;  // least-squares slope of |dH| against t
  std::string system, method;
  bool truncated = false;
};

/// Long-run energy error tracking.
template <class Sys>
EnergyReport energy_study(const Sys& sys, const ExperimentConfig& cfg) {
  const double h = cfg.h != 0.0 ? cfg.h : 0.2;
  const int steps = cfg.steps > 0 || cfg.t_end > 0.0 ? cfg.resolve_steps(h)
                                                     : static_cast<int>(std::llround(1000.0 / h));
  const MethodConfig mc = cfg.method_config();
  const PhasePoint initial{cfg.q0, cfg.p0, 0.0};
  const double h0 = hamiltonian(sys, initial.q, initial.p);

  const Trajectory traj = run(sys, mc, initial, h, steps);
  EnergyReport report;
  report.system = std::string(sys.name());
  report.method = mc.descriptor();
  report.truncated = traj.truncated;
  double st = 0, sy = 0, stt = 0, sty = 0;
  const size_t npts = traj.points.size();
  for (const auto& pt : traj.points) {
    const double dh = hamiltonian(sys, pt.q, pt.p) - h0;
    report.rows.emplace_back(pt.t, dh);
    report.max_abs = std::max(report.max_abs, std::abs(dh));
    st += pt.t;
    sy += std::abs(dh);
    stt += pt.t * pt.t;
    sty += pt.t * std::abs(dh);
  }
  const double denom = npts * stt - st * st;
  report.drift_slope = denom != 0.0 ? (npts * sty - st * sy) / denom : 0.0;
  return report;
}

struct WorkPrecisionRow {
  std::string method;
  double h = 0.0;
  double seconds = 0.0;
  double error = 0.0;
};

/// Wall time against global error for the requested method plus the two
/// reference methods, over the same h-list.
template <class Sys>
std::vector<WorkPrecisionRow> work_precision(const Sys& sys, const ExperimentConfig& cfg) {
  cfg.require_h_list();
  const PhasePoint initial{cfg.q0, cfg.p0, 0.0};
  const double h_min = cfg.h_list.back();

  std::vector<MethodConfig> methods;
  methods.push_back(cfg.method_config());
  for (Method m : {Method::gauss2, Method::midpoint})
    if (methods.front().method != m) {
      MethodConfig mc;
      mc.method = m;
      mc.tol = cfg.tol;
      methods.push_back(mc);
    }

  std::vector<WorkPrecisionRow> rows;
  for (const MethodConfig& mc : methods)
    for (double h : cfg.h_list) {
      const int steps = cfg.resolve_steps(h);
      const double t_end = steps * h;
      const auto start = std::chrono::steady_clock::now();
      const Trajectory traj = run(sys, mc, initial, h, steps);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (traj.truncated) throw SolverError("work-precision run truncated: " + traj.failure, 0, 0.0);
      const PhasePoint ref = detail::final_reference(sys, initial, t_end, h_min);
      rows.push_back({mc.descriptor(), h, seconds, detail::phase_error(traj.points.back(), ref, "qp")});
    }
  return rows;
}

}  // namespace hem
