#pragma once

// Separable mechanical systems: constant SPD mass matrix plus a potential
// V(q) written against the generic scalar concept.  The force is always
// derived, f(q) = -M^{-1} grad V(q), with the gradient obtained by seeding
// the potential's arguments with Dual variables over whatever scalar the
// caller is working in (plain doubles, duals, jets, jets of duals).

#include <climits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hem/dual.hpp"
#include "hem/errors.hpp"
#include "hem/jet.hpp"
#include "hem/linalg.hpp"

namespace hem {

template <class Sys>
concept MechanicalSystem = requires(const Sys& s, const std::vector<double>& q) {
  { s.dim() } -> std::convertible_to<int>;
  { s.mass() } -> std::convertible_to<Matrix>;
  { s.name() } -> std::convertible_to<std::string_view>;
  { s.potential(q) } -> std::convertible_to<double>;
};

/// Highest Taylor order the system's force supports on jets.  Systems whose
/// potential is only plain-evaluable advertise 0 here and jet-based code
/// refuses orders above 2 instead of silently approximating.
template <class Sys>
int force_jet_order(const Sys& s) {
  if constexpr (requires { s.max_jet_order(); })
    return s.max_jet_order();
  else
    return INT_MAX;
}

/// grad V(q) over any scalar type, by one extra layer of Dual seeding.
template <class Sys, class S>
std::vector<S> potential_gradient(const Sys& sys, const std::vector<S>& q) {
  const int d = static_cast<int>(q.size());
  std::vector<Dual<S>> seeded;
  seeded.reserve(d);
  for (int i = 0; i < d; ++i) seeded.push_back(Dual<S>::seeded(q[static_cast<size_t>(i)], i, d));
  const Dual<S> v = sys.potential(seeded);
  std::vector<S> g;
  g.reserve(d);
  for (int i = 0; i < d; ++i) g.push_back(v.partial(i));
  return g;
}

/// f(q) = -M^{-1} grad V(q).
template <class Sys, class S>
std::vector<S> force(const Sys& sys, const std::vector<S>& q) {
  const Matrix minv = inverse(sys.mass());
  std::vector<S> g = potential_gradient(sys, q);
  for (auto& x : g) x = -1.0 * x;
  return minv.apply(g);
}

/// Hessian of V at a plain point (exact, via nested duals).
template <class Sys>
Matrix potential_hessian(const Sys& sys, const Vec& q) {
  const std::vector<Dual<double>> qd = seed_vector(q);
  const std::vector<Dual<double>> g = potential_gradient(sys, qd);
  return dual_jacobian(g, static_cast<int>(q.size()));
}

/// H(q, p) = 1/2 p^T M^{-1} p + V(q).
template <class Sys>
double hamiltonian(const Sys& sys, const Vec& q, const Vec& p) {
  if (static_cast<int>(q.size()) != sys.dim() || q.size() != p.size())
    throw UsageError("hamiltonian: dimension mismatch");
  const Vec minv_p = inverse(sys.mass()).apply(p);
  double kin = 0.0;
  for (size_t i = 0; i < p.size(); ++i) kin += 0.5 * p[i] * minv_p[i];
  return kin + sys.potential(q);
}

/// Phase-space state (q, p) at time t, with p = M q' for these systems.
struct PhasePoint {
  Vec q, p;
  double t = 0.0;
};

template <class Sys>
double energy(const Sys& sys, const PhasePoint& state) {
  return hamiltonian(sys, state.q, state.p);
}

// The three builtin systems.

struct Sho {
  std::string_view name() const { return "sho"; }
  int dim() const { return 1; }
  Matrix mass() const { return Matrix::identity(1); }
  template <class S>
  S potential(const std::vector<S>& q) const {
    return 0.5 * (q[0] * q[0]);
  }
};

/// Planar pendulum, unit mass and rod length; V normalized so V(0) = 0.
struct Pendulum {
  std::string_view name() const { return "pendulum"; }
  int dim() const { return 1; }
  Matrix mass() const { return Matrix::identity(1); }
  template <class S>
  S potential(const std::vector<S>& q) const {
    return 1.0 - cos(q[0]);
  }
};

/// Unforced undamped Duffing oscillator, V(q) = -q^2/2 + q^4/4.
struct Duffing {
  std::string_view name() const { return "duffing"; }
  int dim() const { return 1; }
  Matrix mass() const { return Matrix::identity(1); }
  template <class S>
  S potential(const std::vector<S>& q) const {
    const S q2 = q[0] * q[0];
    return 0.25 * (q2 * q2) - 0.5 * q2;
  }
};

using BuiltinSystem = std::variant<Sho, Pendulum, Duffing>;

inline BuiltinSystem builtin(std::string_view name) {
  if (name == "sho") return Sho{};
  if (name == "pendulum") return Pendulum{};
  if (name == "duffing") return Duffing{};
  throw UsageError("unknown system '" + std::string(name) + "' (expected sho|pendulum|duffing)");
}

inline std::vector<std::string_view> builtin_names() { return {"sho", "pendulum", "duffing"}; }

}  // namespace hem
