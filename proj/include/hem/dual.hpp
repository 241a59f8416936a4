#pragma once

// Forward-mode directional derivatives.  Dual<T> carries a value and its
// partial derivatives with respect to a set of seed variables.  The value
// type T may itself be a Dual or a Jet, which is how second derivatives and
// derivatives of Taylor coefficients are obtained.
//
// A Dual with an empty partials vector is a constant: it behaves as if its
// partials were zero against any seed count.  That convention keeps mixed
// expressions (seeded variables combined with plain constants) free of
// explicit broadcasting.

#include <cstddef>
#include <vector>

#include "hem/errors.hpp"
#include "hem/linalg.hpp"
#include "hem/scalar.hpp"

namespace hem {

template <class T = double>
class Dual {
 public:
  Dual() = default;
  explicit Dual(T value) : value_(std::move(value)) {}
  Dual(T value, std::vector<T> partials) : value_(std::move(value)), partials_(std::move(partials)) {}

  /// Seed variable number `index` out of `count`: partial e_index.
  static Dual seeded(const T& value, int index, int count) {
    std::vector<T> p(static_cast<size_t>(count), zero_like(value));
    p[static_cast<size_t>(index)] = one_like(value);
    return Dual(value, std::move(p));
  }

  const T& value() const { return value_; }
  int num_partials() const { return static_cast<int>(partials_.size()); }
  bool is_constant() const { return partials_.empty(); }

  /// Partial w.r.t. seed i; zero (of the value's shape) for constants.
  T partial(int i) const {
    if (is_constant()) return zero_like(value_);
    if (i < 0 || i >= num_partials()) throw UsageError("Dual::partial: index out of range");
    return partials_[static_cast<size_t>(i)];
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    return combine(a, b, [](const T& x, const T& y) { return x + y; });
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    return combine(a, b, [](const T& x, const T& y) { return x - y; });
  }
  friend Dual operator-(const Dual& a) {
    Dual r(-a.value_);
    r.partials_.reserve(a.partials_.size());
    for (const auto& p : a.partials_) r.partials_.push_back(-p);
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.value_ * b.value_);
    const size_t n = std::max(a.partials_.size(), b.partials_.size());
    check_compatible(a, b);
    r.partials_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      T t = zero_like(r.value_);
      if (i < a.partials_.size()) t = t + a.partials_[i] * b.value_;
      if (i < b.partials_.size()) t = t + a.value_ * b.partials_[i];
      r.partials_.push_back(std::move(t));
    }
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.value_ / b.value_);
    const size_t n = std::max(a.partials_.size(), b.partials_.size());
    check_compatible(a, b);
    const T inv2 = one_like(b.value_) / (b.value_ * b.value_);
    r.partials_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      T num = zero_like(a.value_);
      if (i < a.partials_.size()) num = num + a.partials_[i] * b.value_;
      if (i < b.partials_.size()) num = num - a.value_ * b.partials_[i];
      r.partials_.push_back(num * inv2);
    }
    return r;
  }

  // Mixed arithmetic with plain doubles (constants).
  friend Dual operator+(const Dual& a, double c) { Dual r = a; r.value_ = r.value_ + c; return r; }
  friend Dual operator+(double c, const Dual& a) { return a + c; }
  friend Dual operator-(const Dual& a, double c) { Dual r = a; r.value_ = r.value_ - c; return r; }
  friend Dual operator-(double c, const Dual& a) { return -(a - c); }
  friend Dual operator*(const Dual& a, double c) {
    Dual r(a.value_ * c);
    r.partials_.reserve(a.partials_.size());
    for (const auto& p : a.partials_) r.partials_.push_back(p * c);
    return r;
  }
  friend Dual operator*(double c, const Dual& a) { return a * c; }

  friend Dual sin(const Dual& a) { return a.chain(sin(a.value_), cos(a.value_)); }
  friend Dual cos(const Dual& a) { return a.chain(cos(a.value_), -sin(a.value_)); }
  friend Dual exp(const Dual& a) {
    T e = exp(a.value_);
    return a.chain(e, e);
  }

 private:
  template <class Op>
  static Dual combine(const Dual& a, const Dual& b, Op op) {
    check_compatible(a, b);
    Dual r(op(a.value_, b.value_));
    const size_t n = std::max(a.partials_.size(), b.partials_.size());
    r.partials_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const T pa = i < a.partials_.size() ? a.partials_[i] : zero_like(a.value_);
      const T pb = i < b.partials_.size() ? b.partials_[i] : zero_like(b.value_);
      r.partials_.push_back(op(pa, pb));
    }
    return r;
  }

  static void check_compatible(const Dual& a, const Dual& b) {
    if (!a.partials_.empty() && !b.partials_.empty() && a.partials_.size() != b.partials_.size())
      throw UsageError("Dual: mixed seed counts");
  }

  /// f(a) with f(value) = fv and f'(value) = fd.
  Dual chain(T fv, const T& fd) const {
    Dual r(std::move(fv));
    r.partials_.reserve(partials_.size());
    for (const auto& p : partials_) r.partials_.push_back(fd * p);
    return r;
  }

  T value_{};
  std::vector<T> partials_;
};

template <class T>
Dual<T> zero_like(const Dual<T>& d) {
  return Dual<T>(zero_like(d.value()));
}

template <class T>
Dual<T> one_like(const Dual<T>& d) {
  return Dual<T>(one_like(d.value()));
}

template <class T>
double value_of(const Dual<T>& d) {
  return value_of(d.value());
}

/// Seed a double vector as independent Dual variables.
inline std::vector<Dual<double>> seed_vector(const Vec& x) {
  std::vector<Dual<double>> r;
  r.reserve(x.size());
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) r.push_back(Dual<double>::seeded(x[i], i, n));
  return r;
}

/// Values of a Dual vector.
inline Vec dual_values(const std::vector<Dual<double>>& x) {
  Vec v;
  v.reserve(x.size());
  for (const auto& d : x) v.push_back(d.value());
  return v;
}

/// Jacobian rows of a Dual vector (one row per entry, one column per seed).
inline Matrix dual_jacobian(const std::vector<Dual<double>>& x, int seeds) {
  Matrix j(static_cast<int>(x.size()), seeds);
  for (int i = 0; i < j.rows(); ++i)
    for (int k = 0; k < seeds; ++k) j(i, k) = x[static_cast<size_t>(i)].partial(k);
  return j;
}

}  // namespace hem
