#pragma once

// Base of the generic scalar tower.  All numeric code in this library is
// written against an informal scalar concept: a type closed under +, -, *,
// mixed arithmetic with double, and the analytic functions sin/cos/exp.
// double models it directly; Dual<T> and Jet<T> model it recursively, which
// is what lets one implementation of a formula produce values, Jacobians,
// and Taylor coefficients alike.

#include <cmath>
#include <span>
#include <vector>

#include "hem/errors.hpp"

namespace hem {

inline double zero_like(double) { return 0.0; }
inline double one_like(double) { return 1.0; }

/// Collapse a nested scalar to its plain double value.
inline double value_of(double x) { return x; }

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }

/// x^k for integer k >= 0 by binary exponentiation.  Works for every scalar
/// in the tower (jets stay truncation-exact, unlike a pow() round trip).
template <class S>
S pow_int(const S& x, int k) {
  if (k < 0) throw UsageError("pow_int: negative exponent");
  S result = one_like(x);
  S base = x;
  for (; k > 0; k >>= 1) {
    if (k & 1) result = result * base;
    base = base * base;
  }
  return result;
}

/// Horner evaluation of c[0] + c[1] x + ... + c[n] x^n.
template <class S>
S polyval(std::span<const double> c, const S& x) {
  S acc = zero_like(x);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace hem
