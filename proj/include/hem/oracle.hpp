#pragma once

// Reference solutions and the exact discrete Lagrangian oracle.
//
// L_d^E(q0, q1, h) is the action along the Euler-Lagrange boundary-value
// solution.  The oracle computes it by shooting on the initial velocity with
// a fine-step gauss2 integration (step <= h/1000), then Richardson-
// extrapolated composite Simpson quadrature of L along that solution.  For
// the harmonic oscillator the closed form
//
//   L_d^E = ((q0^2 + q1^2) cos h - 2 q0 q1) / (2 sin h)
//
// is available; tests validate it against the numerical oracle before use.

#include <cmath>
#include <functional>
#include <vector>

#include "hem/errors.hpp"
#include "hem/integrator.hpp"
#include "hem/linalg.hpp"
#include "hem/systems.hpp"

namespace hem {

/// Exact harmonic-oscillator flow (unit mass and frequency).
inline PhasePoint sho_flow(const PhasePoint& initial, double t) {
  const double c = std::cos(t - initial.t), s = std::sin(t - initial.t);
  return {{initial.q[0] * c + initial.p[0] * s}, {-initial.q[0] * s + initial.p[0] * c}, t};
}

/// Closed-form exact discrete Lagrangian of the harmonic oscillator.
inline double sho_exact_Ld(double q0, double q1, double h) {
  return ((q0 * q0 + q1 * q1) * std::cos(h) - 2.0 * q0 * q1) / (2.0 * std::sin(h));
}

/// March the exact flow with gauss2 at a fixed fine step.
template <class Sys>
PhasePoint reference_state(const Sys& sys, const PhasePoint& initial, double t_end, int steps) {
  PhasePoint y = initial;
  const double h = (t_end - initial.t) / steps;
  for (int k = 0; k < steps; ++k) y = step_gauss2(sys, y, h);
  y.t = t_end;
  return y;
}

struct OracleOptions {
  int substeps = 1000;        // integration steps over [0, h]
  double shoot_tol = 1e-12;   // on |q(h) - q1|, relative to max(1, |q1|)
  int shoot_max_iter = 30;
  double quad_tol = 1e-12;    // Richardson error estimate bound
};

/// L_d^E(q0, q1, h) by shooting + composite quadrature.
template <class Sys>
double exact_Ld_oracle(const Sys& sys, const Vec& q0, const Vec& q1, double h,
                       const OracleOptions& opts = {}) {
  const int d = sys.dim();
  const int N = opts.substeps;
  if (N < 4 || N % 4 != 0) throw UsageError("exact_Ld_oracle: substeps must be a positive multiple of 4");
  const Matrix minv = inverse(sys.mass());

  auto shoot = [&](const Vec& v0) {
    std::vector<PhasePoint> path;
    path.reserve(static_cast<size_t>(N) + 1);
    PhasePoint y{q0, sys.mass().apply(v0), 0.0};
    path.push_back(y);
    const double dt = h / N;
    for (int k = 0; k < N; ++k) {
      y = step_gauss2(sys, y, dt);
      path.push_back(y);
    }
    return path;
  };

  Vec v0 = vec_scale(1.0 / h, vec_sub(q1, q0));
  std::vector<PhasePoint> path;
  const double tol = opts.shoot_tol * std::max(1.0, norm_inf(q1));
  bool hit = false;
  for (int it = 0; it <= opts.shoot_max_iter; ++it) {
    path = shoot(v0);
    const Vec miss = vec_sub(path.back().q, q1);
    if (norm_inf(miss) < tol) {
      hit = true;
      break;
    }
    if (it == opts.shoot_max_iter) break;
    Matrix sens(d, d);  // dq(h)/dv0 by central differences
    for (int j = 0; j < d; ++j) {
      const double delta = 1e-6 * std::max(1.0, std::abs(v0[static_cast<size_t>(j)]));
      Vec vp = v0, vm = v0;
      vp[static_cast<size_t>(j)] += delta;
      vm[static_cast<size_t>(j)] -= delta;
      const Vec qp = shoot(vp).back().q;
      const Vec qm = shoot(vm).back().q;
      for (int i = 0; i < d; ++i)
        sens(i, j) = (qp[static_cast<size_t>(i)] - qm[static_cast<size_t>(i)]) / (2 * delta);
    }
    v0 = vec_add(v0, solve_linear(sens, vec_scale(-1.0, miss)));
  }
  if (!hit) throw OracleError("exact_Ld_oracle: shooting did not reach q1");

  // L along the solution, from the phase samples: L = 1/2 p^T M^{-1} p - V.
  auto lagrangian_at = [&](const PhasePoint& y) {
    const Vec mp = minv.apply(y.p);
    double kin = 0.0;
    for (int i = 0; i < d; ++i) kin += 0.5 * y.p[static_cast<size_t>(i)] * mp[static_cast<size_t>(i)];
    return kin - sys.potential(y.q);
  };
  std::vector<double> lvals;
  lvals.reserve(path.size());
  for (const auto& y : path) lvals.push_back(lagrangian_at(y));

  auto simpson = [&](int stride) {
    const int nseg = N / stride;
    const double dt = h / nseg;
    double acc = 0.0;
    for (int k = 0; k + 2 <= nseg; k += 2)
      acc += dt / 3.0 *
             (lvals[static_cast<size_t>(k) * stride] + 4.0 * lvals[static_cast<size_t>(k + 1) * stride] +
              lvals[static_cast<size_t>(k + 2) * stride]);
    return acc;
  };
  const double fine = simpson(1);
  const double coarse = simpson(2);
  const double value = (16.0 * fine - coarse) / 15.0;
  if (std::abs(fine - coarse) / 15.0 > opts.quad_tol * std::max(1.0, std::abs(value)))
    throw OracleError("exact_Ld_oracle: quadrature did not reach the requested accuracy");
  return value;
}

}  // namespace hem
