#pragma once

// Endpoint collocation for the Hermite interpolant.  Given boundary values
// (q0, q1) and a step h, find endpoint velocities (v0, v1) such that the
// degree-(2n-1) interpolant built from prolongation data satisfies the
// order-n collocation condition at both endpoints:
//
//   q_d^(j)(0) = P_j(q0, v0)  and  q_d^(j)(h) = P_j(q1, v1),  j = 2..n,
//
// with P_j the j-th derivative of the flow through the phase point.  The
// conditions for j <= n-1 hold identically because the Hermite data is
// filled from the prolongation jets, so only the order-n pair remains: two
// implicit equations in (v0, v1), solved by Newton with the exact Jacobian
// from Dual seeding.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hem/dual.hpp"
#include "hem/errors.hpp"
#include "hem/hermite.hpp"
#include "hem/linalg.hpp"
#include "hem/prolongation.hpp"
#include "hem/systems.hpp"

namespace hem {

/// Truncation order used throughout the collocation / discrete-Lagrangian
/// pipeline for a given n (fixed per computation; jets never resize).
inline int pipeline_jet_order(int n) { return std::max(n, 2 * (n / 2)) + 1; }

template <class T = double>
struct CollocationParts {
  Jet<T> jet0, jet1;          // prolongation jets through (q0,v0), (q1,v1)
  PolynomialCurve<T> curve;   // assembled Hermite interpolant
  std::vector<T> r0, r1;      // order-n defect at t=0 and t=h
};

/// Build the interpolant from prolongation data and return the order-n
/// residual pair (q_d^(n)(0) - P_n(q0,v0), q_d^(n)(h) - P_n(q1,v1)).
template <class Sys, class T>
CollocationParts<T> collocation_parts(const Sys& sys, int n, double h,
                                      const std::vector<T>& q0, const std::vector<T>& q1,
                                      const std::vector<T>& v0, const std::vector<T>& v1) {
  if (n < 2) throw UsageError("collocation: n >= 2 required");
  if (h == 0.0) throw UsageError("collocation: nonzero step required");
  const int order = pipeline_jet_order(n);
  Jet<T> jet0 = solution_jet(sys, q0, v0, order);
  Jet<T> jet1 = solution_jet(sys, q1, v1, order);

  std::vector<std::vector<T>> a0, a1;
  a0.reserve(n);
  a1.reserve(n);
  for (int j = 0; j < n; ++j) {
    a0.push_back(jet0.derivative_value(j));
    a1.push_back(jet1.derivative_value(j));
  }
  HermiteData<T> data(n, h, std::move(a0), std::move(a1));
  PolynomialCurve<T> curve = assemble(data);

  std::vector<T> r0 = vec_sub(curve.eval_deriv(0.0, n), jet0.derivative_value(n));
  std::vector<T> r1 = vec_sub(curve.eval_deriv(h, n), jet1.derivative_value(n));
  return {std::move(jet0), std::move(jet1), std::move(curve), std::move(r0), std::move(r1)};
}

/// Raw residual pair, as a plain function of (v0, v1).
template <class Sys>
std::pair<Vec, Vec> collocation_residual(const Sys& sys, int n, double h,
                                         const Vec& q0, const Vec& q1,
                                         const Vec& v0, const Vec& v1) {
  auto parts = collocation_parts(sys, n, h, q0, q1, v0, v1);
  return {std::move(parts.r0), std::move(parts.r1)};
}

struct CollocationOptions {
  std::optional<std::pair<Vec, Vec>> guess;  // default: divided difference
  double tol = 1e-12;                        // on the h-scaled residual, relative to max(1,|q0|,|q1|)
  int max_iter = 25;
};

struct CollocationSolution {
  Vec v0, v1;
  HermiteData<double> data;
  PolynomialCurve<double> curve;
  int newton_iterations = 0;
  double residual_norm = 0.0;  // scaled residual at acceptance
};

namespace detail {
/// The raw order-n defect grows like h^{-n}; scale by h^n/n! so tolerances
/// are uniform in h.
inline double residual_scale(int n, double h) {
  double s = 1.0;
  for (int i = 1; i <= n; ++i) s *= std::abs(h) / i;
  return s;
}
}  // namespace detail

/// Newton solve for the endpoint velocities.  Linear problems (SHO at any n,
/// any system with n <= 3) converge in a single step.
template <class Sys>
CollocationSolution solve_collocation(const Sys& sys, int n, double h,
                                      const Vec& q0, const Vec& q1,
                                      const CollocationOptions& opts = {}) {
  const int d = sys.dim();
  if (static_cast<int>(q0.size()) != d || static_cast<int>(q1.size()) != d)
    throw UsageError("solve_collocation: dimension mismatch");

  Vec u(2 * static_cast<size_t>(d));
  if (opts.guess) {
    for (int i = 0; i < d; ++i) {
      u[static_cast<size_t>(i)] = opts.guess->first[static_cast<size_t>(i)];
      u[static_cast<size_t>(d + i)] = opts.guess->second[static_cast<size_t>(i)];
    }
  } else {
    for (int i = 0; i < d; ++i)
      u[static_cast<size_t>(i)] = u[static_cast<size_t>(d + i)] =
          (q1[static_cast<size_t>(i)] - q0[static_cast<size_t>(i)]) / h;
  }

  const double scale = detail::residual_scale(n, h);
  const double tol = opts.tol * std::max({1.0, norm_inf(q0), norm_inf(q1)});

  auto fj = [&](const Vec& vars) {
    std::vector<Dual<double>> v0(static_cast<size_t>(d)), v1(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
      v0[static_cast<size_t>(i)] = Dual<double>::seeded(vars[static_cast<size_t>(i)], i, 2 * d);
      v1[static_cast<size_t>(i)] = Dual<double>::seeded(vars[static_cast<size_t>(d + i)], d + i, 2 * d);
    }
    std::vector<Dual<double>> cq0, cq1;
    for (double x : q0) cq0.emplace_back(x);
    for (double x : q1) cq1.emplace_back(x);
    auto parts = collocation_parts(sys, n, h, cq0, cq1, v0, v1);
    std::vector<Dual<double>> r;
    r.reserve(2 * static_cast<size_t>(d));
    for (auto& x : parts.r0) r.push_back(scale * x);
    for (auto& x : parts.r1) r.push_back(scale * x);
    return std::make_pair(dual_values(r), dual_jacobian(r, 2 * d));
  };

  NewtonResult res = newton_solve(fj, std::move(u), tol, opts.max_iter, "collocation");

  Vec v0(res.x.begin(), res.x.begin() + d);
  Vec v1(res.x.begin() + d, res.x.end());
  auto parts = collocation_parts(sys, n, h, q0, q1, v0, v1);
  std::vector<std::vector<double>> a0, a1;
  for (int j = 0; j < n; ++j) {
    a0.push_back(parts.jet0.derivative_value(j));
    a1.push_back(parts.jet1.derivative_value(j));
  }
  return {std::move(v0), std::move(v1),
          HermiteData<double>(n, h, std::move(a0), std::move(a1)), std::move(parts.curve),
          res.iterations, res.residual_norm};
}

}  // namespace hem
