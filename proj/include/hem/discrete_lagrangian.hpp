#pragma once

// The discrete Lagrangian L_d(q0, q1, h): Euler-Maclaurin quadrature of
// L(q_d, q_d') over one step, with the endpoint derivative data of the
// collocated Hermite interpolant supplied by prolongation jets,
//
//   L_d = h/2 (L|_0 + L|_h)
//         - sum_{l=1}^m  B_{2l}/(2l)!  h^{2l} ( d^{2l-1}L/dt^{2l-1}|_h
//                                             - d^{2l-1}L/dt^{2l-1}|_0 ).
//
// Collocation makes the interpolant's endpoint derivatives up to order n
// equal to the prolongation values, and 2m <= n, so the L-jets may be built
// directly from the prolongation jets.  Partial derivatives D1, D2 go
// through the implicit collocation solve by the implicit function theorem,
// which is exact at the converged point.

#include <cmath>
#include <utility>
#include <vector>

#include "hem/collocation.hpp"
#include "hem/dual.hpp"
#include "hem/errors.hpp"
#include "hem/jet.hpp"
#include "hem/linalg.hpp"
#include "hem/systems.hpp"

namespace hem {

/// Bernoulli numbers B_0..B_12 as exact rationals (B_1 = -1/2 convention).
struct BernoulliTable {
  static constexpr int max_index = 12;

  static constexpr long long numerator[max_index + 1] = {1, -1, 1, 0, -1, 0, 1, 0, -1, 0, 5, 0, -691};
  static constexpr long long denominator[max_index + 1] = {1, 2, 6, 1, 30, 1, 42, 1, 30, 1, 66, 1, 2730};

  static double value(int k) {
    if (k < 0 || k > max_index) throw UsageError("BernoulliTable: index out of range");
    return static_cast<double>(numerator[k]) / static_cast<double>(denominator[k]);
  }

  /// B_{2l} / (2l)!, the Euler-Maclaurin correction weight.
  static double correction_weight(int l) {
    double f = 1.0;
    for (int i = 2; i <= 2 * l; ++i) f *= i;
    return value(2 * l) / f;
  }
};

/// One-interval Euler-Maclaurin rule from endpoint jets of the integrand.
/// The jets are forward Taylor expansions of f at 0 and at h; m correction
/// terms need derivatives up to order 2m-1.
template <class T>
T euler_maclaurin(const Jet<T>& f0, const Jet<T>& f1, double h, int m) {
  if (m < 0 || 2 * m > BernoulliTable::max_index) throw UsageError("euler_maclaurin: bad m");
  if (f0.dim() != 1 || f1.dim() != 1) throw UsageError("euler_maclaurin: scalar integrand required");
  if (f0.order() < 2 * m - 1 || f1.order() < 2 * m - 1)
    throw CapabilityError("euler_maclaurin: jets carry fewer than 2m-1 derivatives");
  T acc = (h / 2.0) * (f0.coeff(0, 0) + f1.coeff(0, 0));
  double h2l = 1.0;
  for (int l = 1; l <= m; ++l) {
    h2l *= h * h;
    const T d1 = f1.derivative_value(2 * l - 1)[0];
    const T d0 = f0.derivative_value(2 * l - 1)[0];
    acc = acc - (BernoulliTable::correction_weight(l) * h2l) * (d1 - d0);
  }
  return acc;
}

/// Composite Euler-Maclaurin with N subintervals: trapezoid sums of f plus
/// endpoint-derivative corrections.  The endpoint jets are expansions of
/// the integrand at a and at b.
template <class F>
double euler_maclaurin_composite(F&& f, const Jet<double>& fa, const Jet<double>& fb,
                                 double a, double b, int subintervals, int m) {
  if (subintervals < 1) throw UsageError("euler_maclaurin_composite: N >= 1 required");
  if (m < 0 || 2 * m > BernoulliTable::max_index) throw UsageError("euler_maclaurin_composite: bad m");
  if (fa.order() < 2 * m - 1 || fb.order() < 2 * m - 1)
    throw CapabilityError("euler_maclaurin_composite: jets carry fewer than 2m-1 derivatives");
  const double theta = (b - a) / subintervals;
  double trap = 0.5 * (fa.coeff(0, 0) + fb.coeff(0, 0));
  for (int k = 1; k < subintervals; ++k) trap += f(a + k * theta);
  double acc = theta * trap;
  double t2l = 1.0;
  for (int l = 1; l <= m; ++l) {
    t2l *= theta * theta;
    acc -= BernoulliTable::correction_weight(l) * t2l *
           (fb.derivative_value(2 * l - 1)[0] - fa.derivative_value(2 * l - 1)[0]);
  }
  return acc;
}

/// Jet of t -> L(q(t), q'(t)) along a position jet (order drops by one).
template <class Sys, class T>
Jet<T> lagrangian_jet(const Sys& sys, const Jet<T>& qjet) {
  if (qjet.order() < 1) throw CapabilityError("lagrangian_jet: jet order too low");
  const int d = qjet.dim();
  const Matrix mass = sys.mass();
  const Jet<T> vel = qjet.derivative_jet();
  const int lorder = qjet.order() - 1;

  std::vector<Jet<T>> vcomp, qcomp;
  vcomp.reserve(d);
  qcomp.reserve(d);
  const Jet<T> qtrunc = qjet.truncated(lorder);
  for (int i = 0; i < d; ++i) {
    vcomp.push_back(vel.component(i));
    qcomp.push_back(qtrunc.component(i));
  }

  Jet<T> kinetic(1, lorder);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (mass(i, j) == 0.0) continue;
      kinetic = kinetic + (0.5 * mass(i, j)) * (vcomp[static_cast<size_t>(i)] * vcomp[static_cast<size_t>(j)]);
    }
  return kinetic - sys.potential(qcomp);
}

/// L_d from the two prolongation jets (valid at the collocation solution).
template <class Sys, class T>
T ld_from_jets(const Sys& sys, const Jet<T>& jet0, const Jet<T>& jet1, double h, int m) {
  return euler_maclaurin(lagrangian_jet(sys, jet0), lagrangian_jet(sys, jet1), h, m);
}

struct LdEvaluation {
  double value = 0.0;
  Vec D1, D2;  // filled when gradients were requested
  bool has_gradients = false;
  CollocationSolution colloc;
  int n = 0, m = 0;
  double h = 0.0;
};

inline int resolve_quadrature_terms(int n, int m) {
  if (m < 0) return n / 2;
  if (m > n / 2) throw UsageError("discrete Lagrangian: m <= floor(n/2) required");
  return m;
}

namespace detail {

struct LdDualParts {
  Dual<double> value;
  std::vector<Dual<double>> residual;  // scaled, 2*dim entries
};

/// One pass with (q0, q1, v0, v1) seeded as 4*dim Dual variables.
template <class Sys>
LdDualParts ld_dual_pass(const Sys& sys, int n, int m, double h,
                         const Vec& q0, const Vec& q1, const Vec& v0, const Vec& v1) {
  const int d = sys.dim();
  const int seeds = 4 * d;
  std::vector<Dual<double>> dq0, dq1, dv0, dv1;
  for (int i = 0; i < d; ++i) {
    dq0.push_back(Dual<double>::seeded(q0[static_cast<size_t>(i)], i, seeds));
    dq1.push_back(Dual<double>::seeded(q1[static_cast<size_t>(i)], d + i, seeds));
    dv0.push_back(Dual<double>::seeded(v0[static_cast<size_t>(i)], 2 * d + i, seeds));
    dv1.push_back(Dual<double>::seeded(v1[static_cast<size_t>(i)], 3 * d + i, seeds));
  }
  auto parts = collocation_parts(sys, n, h, dq0, dq1, dv0, dv1);
  LdDualParts out{ld_from_jets(sys, parts.jet0, parts.jet1, h, m), {}};
  const double scale = residual_scale(n, h);
  out.residual.reserve(2 * static_cast<size_t>(d));
  for (auto& x : parts.r0) out.residual.push_back(scale * x);
  for (auto& x : parts.r1) out.residual.push_back(scale * x);
  return out;
}

/// D_i L_d = dL/dq_i + (dL/du) w_i with (dR/du) w_i = -dR/dq_i, u = (v0,v1).
/// All partials come from one Dual pass; exact at a converged collocation.
template <class Sys>
std::pair<Vec, Vec> ld_gradients(const Sys& sys, int n, int m, double h,
                                 const Vec& q0, const Vec& q1, const Vec& v0, const Vec& v1,
                                 double* value_out = nullptr, Vec* residual_out = nullptr) {
  const int d = sys.dim();
  const LdDualParts pass = ld_dual_pass(sys, n, m, h, q0, q1, v0, v1);
  if (value_out) *value_out = pass.value.value();
  if (residual_out) *residual_out = dual_values(pass.residual);

  Matrix ru(2 * d, 2 * d);
  for (int r = 0; r < 2 * d; ++r)
    for (int c = 0; c < 2 * d; ++c) ru(r, c) = pass.residual[static_cast<size_t>(r)].partial(2 * d + c);

  Vec grad_u(2 * static_cast<size_t>(d));
  for (int c = 0; c < 2 * d; ++c) grad_u[static_cast<size_t>(c)] = pass.value.partial(2 * d + c);

  auto total = [&](int offset) {
    Vec g(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
      Vec rhs(2 * static_cast<size_t>(d));
      for (int r = 0; r < 2 * d; ++r) rhs[static_cast<size_t>(r)] = -pass.residual[static_cast<size_t>(r)].partial(offset + j);
      const Vec w = solve_linear(ru, rhs);
      double acc = pass.value.partial(offset + j);
      for (int r = 0; r < 2 * d; ++r) acc += grad_u[static_cast<size_t>(r)] * w[static_cast<size_t>(r)];
      g[static_cast<size_t>(j)] = acc;
    }
    return g;
  };
  return {total(0), total(d)};
}

}  // namespace detail

/// Evaluate L_d(q0, q1, h); set `gradients` to also compute D1, D2.
template <class Sys>
LdEvaluation eval_Ld(const Sys& sys, int n, int m, double h, const Vec& q0, const Vec& q1,
                     bool gradients = false, const CollocationOptions& copts = {}) {
  m = resolve_quadrature_terms(n, m);
  CollocationSolution sol = solve_collocation(sys, n, h, q0, q1, copts);
  LdEvaluation out;
  out.n = n;
  out.m = m;
  out.h = h;
  if (gradients) {
    auto [d1, d2] = detail::ld_gradients(sys, n, m, h, q0, q1, sol.v0, sol.v1, &out.value);
    out.D1 = std::move(d1);
    out.D2 = std::move(d2);
    out.has_gradients = true;
  } else {
    const int order = pipeline_jet_order(n);
    out.value = ld_from_jets(sys, solution_jet(sys, q0, sol.v0, order),
                             solution_jet(sys, q1, sol.v1, order), h, m);
  }
  out.colloc = std::move(sol);
  return out;
}

/// (D1 L_d, D2 L_d) at (q0, q1).
template <class Sys>
std::pair<Vec, Vec> grad_Ld(const Sys& sys, int n, int m, double h, const Vec& q0, const Vec& q1,
                            const CollocationOptions& copts = {}) {
  m = resolve_quadrature_terms(n, m);
  const CollocationSolution sol = solve_collocation(sys, n, h, q0, q1, copts);
  return detail::ld_gradients(sys, n, m, h, q0, q1, sol.v0, sol.v1);
}

}  // namespace hem
