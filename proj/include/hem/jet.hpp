#pragma once

// Truncated Taylor series ("jets") of vector-valued curves in one time
// variable.  A jet of order K stores coefficients c_0..c_K, each a vector of
// length dim; the j-th derivative of the curve is j! * c_j.  Arithmetic is
// truncation-exact: products use the Cauchy convolution, analytic functions
// use the standard coefficient recurrences.
//
// Jets never resize implicitly.  Operands must agree in order, and in
// dimension except that a scalar (dim 1) jet broadcasts against a vector one.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hem/errors.hpp"
#include "hem/scalar.hpp"

namespace hem {

namespace detail {
inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace detail

template <class T = double>
class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || order < 0) throw UsageError("Jet: dim >= 1 and order >= 0 required");
    c_.resize(static_cast<size_t>(order + 1) * dim);
  }

  /// Scalar jet of the identity curve t -> x0 + t, truncated at `order`.
  static Jet variable(const T& x0, int order) {
    Jet j(1, order);
    j.coeff(0, 0) = x0;
    if (order >= 1) j.coeff(1, 0) = one_like(x0);
    return j;
  }

  static Jet constant(const T& x0, int order) {
    Jet j(1, order);
    j.coeff(0, 0) = x0;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  T& coeff(int k, int i) { return c_[static_cast<size_t>(k) * dim_ + i]; }
  const T& coeff(int k, int i) const { return c_[static_cast<size_t>(k) * dim_ + i]; }

  std::vector<T> coeff_vec(int k) const {
    check_index(k);
    return {c_.begin() + static_cast<long>(k) * dim_, c_.begin() + static_cast<long>(k + 1) * dim_};
  }

  void set_coeff_vec(int k, const std::vector<T>& v) {
    check_index(k);
    if (static_cast<int>(v.size()) != dim_) throw UsageError("Jet: coefficient dimension mismatch");
    for (int i = 0; i < dim_; ++i) coeff(k, i) = v[static_cast<size_t>(i)];
  }

  /// j-th derivative value of the curve, j! * c_j.
  std::vector<T> derivative_value(int j) const {
    check_index(j);
    std::vector<T> v = coeff_vec(j);
    const double f = detail::factorial(j);
    for (auto& x : v) x = f * x;
    return v;
  }

  Jet component(int i) const {
    if (i < 0 || i >= dim_) throw UsageError("Jet::component: index out of range");
    Jet j(1, order_);
    for (int k = 0; k <= order_; ++k) j.coeff(k, 0) = coeff(k, i);
    return j;
  }

  void set_component(int i, const Jet& s) {
    if (s.dim_ != 1 || s.order_ != order_ || i < 0 || i >= dim_)
      throw UsageError("Jet::set_component: shape mismatch");
    for (int k = 0; k <= order_; ++k) coeff(k, i) = s.coeff(k, 0);
  }

  /// Copy truncated (or zero-extended is not allowed) to a lower order.
  Jet truncated(int new_order) const {
    if (new_order < 0 || new_order > order_) throw UsageError("Jet::truncated: bad order");
    Jet j(dim_, new_order);
    for (int k = 0; k <= new_order; ++k)
      for (int i = 0; i < dim_; ++i) j.coeff(k, i) = coeff(k, i);
    return j;
  }

  /// Jet of the time derivative (order drops by one).
  Jet derivative_jet() const {
    if (order_ < 1) throw UsageError("Jet::derivative_jet: order 0 jet");
    Jet j(dim_, order_ - 1);
    for (int k = 1; k <= order_; ++k)
      for (int i = 0; i < dim_; ++i) j.coeff(k - 1, i) = static_cast<double>(k) * coeff(k, i);
    return j;
  }

  friend Jet operator+(const Jet& a, const Jet& b) { return zip(a, b, false); }
  friend Jet operator-(const Jet& a, const Jet& b) { return zip(a, b, true); }

  friend Jet operator-(const Jet& a) {
    Jet r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  /// Cauchy product; componentwise, or broadcast if one factor is scalar.
  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.order_ != b.order_) throw UsageError("Jet: order mismatch in product");
    if (a.dim_ != b.dim_ && a.dim_ != 1 && b.dim_ != 1)
      throw UsageError("Jet: dimension mismatch in product");
    const int dim = std::max(a.dim_, b.dim_);
    const int K = a.order_;
    Jet r(dim, K);
    for (int i = 0; i < dim; ++i) {
      const int ia = a.dim_ == 1 ? 0 : i;
      const int ib = b.dim_ == 1 ? 0 : i;
      for (int k = 0; k <= K; ++k) {
        T acc = zero_like(a.coeff(0, 0));
        for (int j = 0; j <= k; ++j) acc = acc + a.coeff(j, ia) * b.coeff(k - j, ib);
        r.coeff(k, i) = std::move(acc);
      }
    }
    return r;
  }

  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    for (int i = 0; i < r.dim_; ++i) r.coeff(0, i) = r.coeff(0, i) + s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return -(a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }

  friend Jet sin(const Jet& a) { return a.sincos().first; }
  friend Jet cos(const Jet& a) { return a.sincos().second; }

  friend Jet exp(const Jet& a) {
    Jet e(a.dim_, a.order_);
    for (int i = 0; i < a.dim_; ++i) {
      e.coeff(0, i) = exp(a.coeff(0, i));
      for (int k = 1; k <= a.order_; ++k) {
        T acc = zero_like(a.coeff(0, i));
        for (int j = 1; j <= k; ++j) acc = acc + (static_cast<double>(j) * a.coeff(j, i)) * e.coeff(k - j, i);
        e.coeff(k, i) = (1.0 / k) * acc;
      }
    }
    return e;
  }

 private:
  static Jet zip(const Jet& a, const Jet& b, bool subtract) {
    if (a.dim_ != b.dim_ || a.order_ != b.order_)
      throw UsageError("Jet: dimension/order mismatch in sum");
    Jet r = a;
    for (size_t i = 0; i < r.c_.size(); ++i)
      r.c_[i] = subtract ? r.c_[i] - b.c_[i] : r.c_[i] + b.c_[i];
    return r;
  }

  void check_index(int k) const {
    if (k < 0 || k > order_) throw UsageError("Jet: coefficient index out of range");
  }

  // Simultaneous sin/cos recurrence (each needs the other's coefficients).
  std::pair<Jet, Jet> sincos() const {
    Jet s(dim_, order_), c(dim_, order_);
    for (int i = 0; i < dim_; ++i) {
      s.coeff(0, i) = sin(coeff(0, i));
      c.coeff(0, i) = cos(coeff(0, i));
      for (int k = 1; k <= order_; ++k) {
        T as = zero_like(coeff(0, i));
        T ac = zero_like(coeff(0, i));
        for (int j = 1; j <= k; ++j) {
          const T ja = static_cast<double>(j) * coeff(j, i);
          as = as + ja * c.coeff(k - j, i);
          ac = ac - ja * s.coeff(k - j, i);
        }
        s.coeff(k, i) = (1.0 / k) * as;
        c.coeff(k, i) = (1.0 / k) * ac;
      }
    }
    return {std::move(s), std::move(c)};
  }

  int dim_ = 0;
  int order_ = -1;
  std::vector<T> c_;
};

template <class T>
Jet<T> zero_like(const Jet<T>& j) {
  return Jet<T>(j.dim(), j.order());
}

template <class T>
Jet<T> one_like(const Jet<T>& j) {
  Jet<T> r(j.dim(), j.order());
  for (int i = 0; i < j.dim(); ++i) r.coeff(0, i) = one_like(j.coeff(0, i));
  return r;
}

/// Named dispatch over the supported unary analytic functions.
template <class T>
Jet<T> apply_analytic(const std::string& name, const Jet<T>& a) {
  if (name == "sin") return sin(a);
  if (name == "cos") return cos(a);
  if (name == "exp") return exp(a);
  throw UsageError("apply_analytic: unsupported function '" + name + "'");
}

/// Composition f(a) from the Taylor coefficients of f about a's constant
/// term (the extension hook for analytic functions beyond the builtin set).
/// fcoeffs[m] is the m-th Taylor coefficient of f at value_of(a_0); the
/// result is exact to the truncation order when fcoeffs covers it.
template <class T>
Jet<T> compose_series(std::span<const T> fcoeffs, const Jet<T>& a) {
  if (a.dim() != 1) throw UsageError("compose_series: scalar jet required");
  if (fcoeffs.empty()) throw UsageError("compose_series: empty coefficient list");
  Jet<T> delta = a;
  delta.coeff(0, 0) = zero_like(a.coeff(0, 0));
  Jet<T> r = Jet<T>::constant(fcoeffs.back(), a.order());
  for (auto it = fcoeffs.rbegin() + 1; it != fcoeffs.rend(); ++it) {
    r = r * delta;
    r.coeff(0, 0) = r.coeff(0, 0) + *it;
  }
  return r;
}

}  // namespace hem
