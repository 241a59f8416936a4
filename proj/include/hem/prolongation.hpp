#pragma once

// Taylor coefficients of the Euler-Lagrange flow through a phase point.
// For q'' = f(q) the jet through (q, v) is built degree by degree:
//
//   c_0 = q,  c_1 = v,  c_{k+2} = [f(q(.))]_k / ((k+1)(k+2)),
//
// where [.]_k is the k-th coefficient of f composed with the jet built so
// far.  Because that coefficient only involves c_0..c_k, every coefficient
// is available when needed.  This replaces the symbolic differentiation of
// f: the same values fall out to machine precision for any order.

#include <vector>

#include "hem/errors.hpp"
#include "hem/jet.hpp"
#include "hem/systems.hpp"

namespace hem {

template <class Sys, class T>
Jet<T> solution_jet(const Sys& sys, const std::vector<T>& q, const std::vector<T>& v, int order) {
  if (order < 2) throw UsageError("solution_jet: order >= 2 required");
  const int d = sys.dim();
  if (static_cast<int>(q.size()) != d || static_cast<int>(v.size()) != d)
    throw UsageError("solution_jet: dimension mismatch");
  if (order - 2 > force_jet_order(sys))
    throw CapabilityError("solution_jet: force of '" + std::string(sys.name()) +
                          "' is not jet-evaluable to order " + std::to_string(order - 2));

  Jet<T> jet(d, order);
  jet.set_coeff_vec(0, q);
  jet.set_coeff_vec(1, v);
  for (int k = 0; k + 2 <= order; ++k) {
    // Evaluate f along the part of the jet already determined.
    std::vector<Jet<T>> pos;
    pos.reserve(d);
    const Jet<T> trunc = jet.truncated(k);
    for (int i = 0; i < d; ++i) pos.push_back(trunc.component(i));
    const std::vector<Jet<T>> f = force(sys, pos);
    const double w = 1.0 / ((k + 1) * (k + 2));
    for (int i = 0; i < d; ++i) jet.coeff(k + 2, i) = w * f[static_cast<size_t>(i)].coeff(k, 0);
  }
  return jet;
}

}  // namespace hem
