#pragma once

// One-step maps and trajectory runner.
//
// The variational step solves  p_k + D1 L_d(q_k, q_{k+1}) = 0  for q_{k+1}
// and then sets  p_{k+1} = D2 L_d(q_k, q_{k+1}).  Two equivalent modes:
// nested (outer Newton on q_{k+1}, collocation re-solved per evaluation) and
// combined (one Newton loop on (q_{k+1}, v0, v1)).  Outer Jacobians use
// central differences; they only steer Newton, the accepted step is defined
// by the residual tolerance.
//
// Reference methods for comparisons: the 2-stage Gauss-Legendre symplectic
// Runge-Kutta scheme (order 4) and the implicit midpoint rule, both applied
// to Hamilton's equations with exact stage Jacobians.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hem/collocation.hpp"
#include "hem/discrete_lagrangian.hpp"
#include "hem/errors.hpp"
#include "hem/linalg.hpp"
#include "hem/systems.hpp"

namespace hem {

enum class Method { hem, gauss2, midpoint };

inline Method method_from_name(std::string_view name) {
  if (name == "hem") return Method::hem;
  if (name == "gauss2") return Method::gauss2;
  if (name == "midpoint") return Method::midpoint;
  throw UsageError("unknown method '" + std::string(name) + "' (expected hem|gauss2|midpoint)");
}

struct MethodConfig {
  Method method = Method::hem;
  int n = 3;
  int m = -1;  // -1: floor(n/2)
  double tol = 1e-12;
  int max_iter = 50;
  bool combined = false;  // hem: solve (q', v0, v1) in one Newton loop
  CollocationOptions colloc;

  void validate() const {
    if (method == Method::hem) {
      if (n < 2) throw UsageError("hem: n >= 2 required");
      resolve_quadrature_terms(n, m);
    }
  }

  std::string descriptor() const {
    switch (method) {
      case Method::gauss2: return "gauss2";
      case Method::midpoint: return "midpoint";
      default: return "hem(" + std::to_string(n) + "," + std::to_string(resolve_quadrature_terms(n, m)) + ")";
    }
  }
};

struct StepDiagnostics {
  int newton_iterations = 0;
  double residual_norm = 0.0;
  double v_defect = 0.0;  // |v1 of previous segment - v0 of this one|, hem only
};

struct Trajectory {
  std::vector<PhasePoint> points;
  std::vector<StepDiagnostics> step_info;  // one entry per accepted step
  std::vector<PolynomialCurve<double>> segments;  // hem dense output, per step
  std::string method;
  bool truncated = false;
  std::string failure;
};

namespace detail {

struct HemStepResult {
  PhasePoint next;
  int iterations = 0;
  double residual_norm = 0.0;
  Vec v0, v1;
  PolynomialCurve<double> curve;
};

template <class Sys>
HemStepResult step_hem_nested(const Sys& sys, const MethodConfig& cfg, const PhasePoint& state, double h) {
  const int d = sys.dim();
  const int m = resolve_quadrature_terms(cfg.n, cfg.m);
  const Matrix minv = inverse(sys.mass());

  CollocationOptions copts = cfg.colloc;  // warm-started across evaluations
  auto d1_at = [&](const Vec& q1) {
    CollocationSolution sol = solve_collocation(sys, cfg.n, h, state.q, q1, copts);
    copts.guess = std::make_pair(sol.v0, sol.v1);
    return std::make_pair(detail::ld_gradients(sys, cfg.n, m, h, state.q, q1, sol.v0, sol.v1).first, sol);
  };

  auto fj = [&](const Vec& q1) {
    auto [d1, sol] = d1_at(q1);
    Vec g = vec_add(state.p, d1);
    Matrix jac(d, d);
    for (int j = 0; j < d; ++j) {
      const double delta = 1e-6 * std::max(1.0, std::abs(q1[static_cast<size_t>(j)]));
      Vec qp = q1, qm = q1;
      qp[static_cast<size_t>(j)] += delta;
      qm[static_cast<size_t>(j)] -= delta;
      const Vec gp = d1_at(qp).first;
      const Vec gm = d1_at(qm).first;
      for (int i = 0; i < d; ++i)
        jac(i, j) = (gp[static_cast<size_t>(i)] - gm[static_cast<size_t>(i)]) / (2 * delta);
    }
    return std::make_pair(std::move(g), std::move(jac));
  };

  Vec guess = vec_add(state.q, vec_scale(h, minv.apply(state.p)));
  NewtonResult res = newton_solve(fj, std::move(guess), cfg.tol, cfg.max_iter, "hem step");

  CollocationSolution sol = solve_collocation(sys, cfg.n, h, state.q, res.x, copts);
  auto [d1, d2] = detail::ld_gradients(sys, cfg.n, m, h, state.q, res.x, sol.v0, sol.v1);
  (void)d1;
  return {PhasePoint{res.x, d2, state.t + h}, res.iterations, res.residual_norm,
          std::move(sol.v0), std::move(sol.v1), std::move(sol.curve)};
}

template <class Sys>
HemStepResult step_hem_combined(const Sys& sys, const MethodConfig& cfg, const PhasePoint& state, double h) {
  const int d = sys.dim();
  const int m = resolve_quadrature_terms(cfg.n, cfg.m);
  const Matrix minv = inverse(sys.mass());

  // Unknowns z = (q', v0, v1); equations: p + D1 L_d = 0 (with the implicit
  // correction evaluated at the current iterate) and the scaled collocation
  // residual.
  auto eqs = [&](const Vec& z) {
    Vec q1(z.begin(), z.begin() + d);
    Vec v0(z.begin() + d, z.begin() + 2 * d);
    Vec v1(z.begin() + 2 * d, z.end());
    Vec resid;
    const auto [d1, d2] = detail::ld_gradients(sys, cfg.n, m, h, state.q, q1, v0, v1, nullptr, &resid);
    (void)d2;
    Vec out(3 * static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = state.p[static_cast<size_t>(i)] + d1[static_cast<size_t>(i)];
    for (int i = 0; i < 2 * d; ++i) out[static_cast<size_t>(d + i)] = resid[static_cast<size_t>(i)];
    return out;
  };

  auto fj = [&](const Vec& z) {
    Vec g = eqs(z);
    Matrix jac(3 * d, 3 * d);
    for (int j = 0; j < 3 * d; ++j) {
      const double delta = 1e-6 * std::max(1.0, std::abs(z[static_cast<size_t>(j)]));
      Vec zp = z, zm = z;
      zp[static_cast<size_t>(j)] += delta;
      zm[static_cast<size_t>(j)] -= delta;
      const Vec gp = eqs(zp);
      const Vec gm = eqs(zm);
      for (int i = 0; i < 3 * d; ++i)
        jac(i, j) = (gp[static_cast<size_t>(i)] - gm[static_cast<size_t>(i)]) / (2 * delta);
    }
    return std::make_pair(std::move(g), std::move(jac));
  };

  Vec z(3 * static_cast<size_t>(d));
  const Vec qguess = vec_add(state.q, vec_scale(h, minv.apply(state.p)));
  const Vec vguess = minv.apply(state.p);
  for (int i = 0; i < d; ++i) {
    z[static_cast<size_t>(i)] = qguess[static_cast<size_t>(i)];
    z[static_cast<size_t>(d + i)] = vguess[static_cast<size_t>(i)];
    z[static_cast<size_t>(2 * d + i)] = vguess[static_cast<size_t>(i)];
  }
  NewtonResult res = newton_solve(fj, std::move(z), cfg.tol, cfg.max_iter, "hem step (combined)");

  Vec q1(res.x.begin(), res.x.begin() + d);
  Vec v0(res.x.begin() + d, res.x.begin() + 2 * d);
  Vec v1(res.x.begin() + 2 * d, res.x.end());
  const auto [d1, d2] = detail::ld_gradients(sys, cfg.n, m, h, state.q, q1, v0, v1);
  (void)d1;
  auto parts = collocation_parts(sys, cfg.n, h, state.q, q1, v0, v1);
  return {PhasePoint{std::move(q1), d2, state.t + h}, res.iterations, res.residual_norm,
          std::move(v0), std::move(v1), std::move(parts.curve)};
}

/// Hamiltonian vector field (M^{-1} p, -grad V).
template <class Sys>
Vec hamiltonian_field(const Sys& sys, const Matrix& minv, const Vec& y) {
  const int d = sys.dim();
  const Vec q(y.begin(), y.begin() + d);
  const Vec p(y.begin() + d, y.end());
  const Vec qdot = minv.apply(p);
  Vec g = potential_gradient(sys, q);
  Vec out(2 * static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    out[static_cast<size_t>(i)] = qdot[static_cast<size_t>(i)];
    out[static_cast<size_t>(d + i)] = -g[static_cast<size_t>(i)];
  }
  return out;
}

/// Jacobian blocks of the field at y: [[0, M^{-1}], [-Hess V, 0]].
template <class Sys>
Matrix hamiltonian_field_jacobian(const Sys& sys, const Matrix& minv, const Vec& y) {
  const int d = sys.dim();
  const Vec q(y.begin(), y.begin() + d);
  const Matrix hess = potential_hessian(sys, q);
  Matrix df(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      df(i, d + j) = minv(i, j);
      df(d + i, j) = -hess(i, j);
    }
  return df;
}

struct RkResult {
  PhasePoint next;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Implicit Runge-Kutta step on Hamilton's equations with the given tableau.
template <class Sys>
RkResult step_irk(const Sys& sys, const PhasePoint& state, double h,
                  const std::vector<Vec>& a, const Vec& b, const Vec& c,
                  double tol, int max_iter, const char* label) {
  const int d = sys.dim();
  const int nd = 2 * d;
  const int s = static_cast<int>(b.size());
  const Matrix minv = inverse(sys.mass());

  Vec y(2 * static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    y[static_cast<size_t>(i)] = state.q[static_cast<size_t>(i)];
    y[static_cast<size_t>(d + i)] = state.p[static_cast<size_t>(i)];
  }
  const Vec f0 = hamiltonian_field(sys, minv, y);

  auto fj = [&](const Vec& stages) {
    Vec g(static_cast<size_t>(s) * nd);
    Matrix jac = Matrix::identity(s * nd);
    std::vector<Vec> fz(static_cast<size_t>(s));
    std::vector<Matrix> dfz(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
      Vec zi(stages.begin() + static_cast<long>(i) * nd, stages.begin() + static_cast<long>(i + 1) * nd);
      fz[static_cast<size_t>(i)] = hamiltonian_field(sys, minv, zi);
      dfz[static_cast<size_t>(i)] = hamiltonian_field_jacobian(sys, minv, zi);
    }
    for (int i = 0; i < s; ++i)
      for (int k = 0; k < nd; ++k) {
        double acc = stages[static_cast<size_t>(i) * nd + k] - y[static_cast<size_t>(k)];
        for (int j = 0; j < s; ++j) acc -= h * a[static_cast<size_t>(i)][static_cast<size_t>(j)] * fz[static_cast<size_t>(j)][static_cast<size_t>(k)];
        g[static_cast<size_t>(i) * nd + k] = acc;
        for (int j = 0; j < s; ++j)
          for (int l = 0; l < nd; ++l)
            jac(i * nd + k, j * nd + l) -= h * a[static_cast<size_t>(i)][static_cast<size_t>(j)] * dfz[static_cast<size_t>(j)](k, l);
      }
    return std::make_pair(std::move(g), std::move(jac));
  };

  Vec stages(static_cast<size_t>(s) * nd);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < nd; ++k)
      stages[static_cast<size_t>(i) * nd + k] = y[static_cast<size_t>(k)] + h * c[static_cast<size_t>(i)] * f0[static_cast<size_t>(k)];
  NewtonResult res = newton_solve(fj, std::move(stages), tol, max_iter, label);

  Vec ynext = y;
  for (int i = 0; i < s; ++i) {
    Vec zi(res.x.begin() + static_cast<long>(i) * nd, res.x.begin() + static_cast<long>(i + 1) * nd);
    const Vec fi = hamiltonian_field(sys, minv, zi);
    for (int k = 0; k < nd; ++k) ynext[static_cast<size_t>(k)] += h * b[static_cast<size_t>(i)] * fi[static_cast<size_t>(k)];
  }
  PhasePoint next{Vec(ynext.begin(), ynext.begin() + d), Vec(ynext.begin() + d, ynext.end()), state.t + h};
  return {std::move(next), res.iterations, res.residual_norm};
}

template <class Sys>
RkResult gauss2_full(const Sys& sys, const PhasePoint& state, double h, double tol, int max_iter) {
  const double r = std::sqrt(3.0) / 6.0;
  static const std::vector<Vec> a{{0.25, 0.25 - r}, {0.25 + r, 0.25}};
  static const Vec b{0.5, 0.5};
  static const Vec c{0.5 - r, 0.5 + r};
  return step_irk(sys, state, h, a, b, c, tol, max_iter, "gauss2 step");
}

template <class Sys>
RkResult midpoint_full(const Sys& sys, const PhasePoint& state, double h, double tol, int max_iter) {
  static const std::vector<Vec> a{{0.5}};
  static const Vec b{1.0};
  static const Vec c{0.5};
  return step_irk(sys, state, h, a, b, c, tol, max_iter, "midpoint step");
}

}  // namespace detail

/// One step of the variational integrator generated by L_d.
template <class Sys>
PhasePoint step_hem(const Sys& sys, const MethodConfig& cfg, const PhasePoint& state, double h) {
  if (h == 0.0) throw UsageError("step_hem: nonzero step required");
  cfg.validate();
  return cfg.combined ? detail::step_hem_combined(sys, cfg, state, h).next
                      : detail::step_hem_nested(sys, cfg, state, h).next;
}

/// Discrete Legendre transforms: (q0, q1) -> (q0, -D1 L_d) and (q1, D2 L_d).
template <class Sys>
PhasePoint legendre_minus(const Sys& sys, const MethodConfig& cfg, const Vec& q0, const Vec& q1, double h) {
  const auto [d1, d2] = grad_Ld(sys, cfg.n, cfg.m, h, q0, q1, cfg.colloc);
  (void)d2;
  return {q0, vec_scale(-1.0, d1), 0.0};
}

template <class Sys>
PhasePoint legendre_plus(const Sys& sys, const MethodConfig& cfg, const Vec& q0, const Vec& q1, double h) {
  const auto [d1, d2] = grad_Ld(sys, cfg.n, cfg.m, h, q0, q1, cfg.colloc);
  (void)d1;
  return {q1, d2, h};
}

/// 2-stage Gauss-Legendre symplectic RK (order 4).
template <class Sys>
PhasePoint step_gauss2(const Sys& sys, const PhasePoint& state, double h,
                       double tol = 1e-12, int max_iter = 50) {
  return detail::gauss2_full(sys, state, h, tol, max_iter).next;
}

/// Implicit midpoint rule (order 2).
template <class Sys>
PhasePoint step_midpoint(const Sys& sys, const PhasePoint& state, double h,
                         double tol = 1e-12, int max_iter = 50) {
  return detail::midpoint_full(sys, state, h, tol, max_iter).next;
}

/// Iterate the configured one-step map.  A failure on the first step throws;
/// a later failure returns the partial trajectory tagged as truncated.
template <class Sys>
Trajectory run(const Sys& sys, const MethodConfig& cfg, const PhasePoint& initial, double h, int steps) {
  if (steps < 1) throw UsageError("run: steps >= 1 required");
  cfg.validate();
  Trajectory traj;
  traj.method = cfg.descriptor();
  traj.points.push_back(initial);
  Vec prev_v1;
  for (int k = 0; k < steps; ++k) {
    const PhasePoint& cur = traj.points.back();
    try {
      if (cfg.method == Method::hem) {
        detail::HemStepResult r = cfg.combined ? detail::step_hem_combined(sys, cfg, cur, h)
                                               : detail::step_hem_nested(sys, cfg, cur, h);
        StepDiagnostics diag{r.iterations, r.residual_norm, 0.0};
        if (!prev_v1.empty()) diag.v_defect = norm_inf(vec_sub(r.v0, prev_v1));
        prev_v1 = r.v1;
        traj.points.push_back(std::move(r.next));
        traj.step_info.push_back(diag);
        traj.segments.push_back(std::move(r.curve));
      } else {
        detail::RkResult r = cfg.method == Method::gauss2
                                 ? detail::gauss2_full(sys, cur, h, cfg.tol, cfg.max_iter)
                                 : detail::midpoint_full(sys, cur, h, cfg.tol, cfg.max_iter);
        traj.points.push_back(std::move(r.next));
        traj.step_info.push_back({r.iterations, r.residual_norm, 0.0});
      }
    } catch (const SolverError& err) {
      if (k == 0)
        throw SolverError("first step failed (" + traj.method + ", h=" + std::to_string(h) + "): " + err.what(),
                          err.iterations, err.residual_norm);
      traj.truncated = true;
      traj.failure = err.what();
      break;
    }
  }
  return traj;
}

}  // namespace hem
