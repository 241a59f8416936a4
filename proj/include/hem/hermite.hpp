#pragma once

// Two-point Hermite interpolation of degree 2n-1 on [0, h]: the polynomial
// matching values and derivatives up to order n-1 at both endpoints,
//
//   q_d(t) = sum_j  A0[j] H_{n,j}(t) + (-1)^j A1[j] H_{n,j}(h - t),
//   H_{n,j}(t) = (t^j / j!) (1 - t/h)^n  sum_{s=0}^{n-j-1} C(n+s-1, s) (t/h)^s.
//
// Curves are stored as monomial coefficients in the scaled variable u = t/h;
// n stays small here, so monomial conditioning is a non-issue and derivative
// evaluation is a coefficient shift.  The basis expansion coefficients are
// built once per assembly in exact integer arithmetic.

#include <cstdint>
#include <vector>

#include "hem/errors.hpp"
#include "hem/jet.hpp"
#include "hem/scalar.hpp"

namespace hem {

namespace detail {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

using IPoly = std::vector<std::int64_t>;  // coefficients in u, ascending

inline IPoly ipoly_mul(const IPoly& a, const IPoly& b) {
  IPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

/// Integer coefficients of H_{n,j}(t) / (h^j / j!) as a polynomial in u.
inline IPoly hermite_basis_upoly(int n, int j) {
  IPoly tail(static_cast<size_t>(n - j), 0);  // sum_s C(n+s-1, s) u^s
  for (int s = 0; s <= n - j - 1; ++s) tail[static_cast<size_t>(s)] = binomial(n + s - 1, s);
  IPoly one_minus_u_pow(static_cast<size_t>(n + 1), 0);  // (1-u)^n
  for (int i = 0; i <= n; ++i)
    one_minus_u_pow[static_cast<size_t>(i)] = (i % 2 == 0 ? 1 : -1) * binomial(n, i);
  IPoly p = ipoly_mul(tail, one_minus_u_pow);
  p.insert(p.begin(), static_cast<size_t>(j), 0);  // * u^j
  return p;
}

/// p(1 - u) as a polynomial in u, exactly.
inline IPoly ipoly_reflect(const IPoly& p) {
  IPoly r(p.size(), 0);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t k = 0; k <= i; ++k)
      r[k] += p[i] * binomial(static_cast<int>(i), static_cast<int>(k)) * (k % 2 == 0 ? 1 : -1);
  return r;
}

}  // namespace detail

/// H_{n,j}(t) evaluated directly from the defining formula.
inline double basis_eval(int n, int j, double t, double h) {
  if (n < 1) throw UsageError("basis_eval: n >= 1 required");
  if (j < 0 || j >= n) throw UsageError("basis_eval: j must satisfy 0 <= j < n");
  const double u = t / h;
  double tail = 0.0;
  for (int s = n - j - 1; s >= 0; --s)
    tail = tail * u + static_cast<double>(detail::binomial(n + s - 1, s));
  double tj = 1.0;
  for (int i = 1; i <= j; ++i) tj *= t / i;  // t^j / j!
  double omu = 1.0;
  for (int i = 0; i < n; ++i) omu *= (1.0 - u);
  return tj * omu * tail;
}

/// Endpoint derivative data: A0[j] = q_d^(j)(0), A1[j] = q_d^(j)(h), j < n.
template <class T = double>
struct HermiteData {
  HermiteData() = default;  // empty placeholder, not usable for assembly
  HermiteData(int n_, double h_, std::vector<std::vector<T>> a0, std::vector<std::vector<T>> a1)
      : n(n_), h(h_), A0(std::move(a0)), A1(std::move(a1)) {
    if (n < 2) throw UsageError("HermiteData: n >= 2 required");
    if (h == 0.0) throw UsageError("HermiteData: nonzero step required");
    if (static_cast<int>(A0.size()) != n || static_cast<int>(A1.size()) != n)
      throw UsageError("HermiteData: need exactly n derivative entries per endpoint");
    const size_t dim = A0[0].size();
    for (const auto& v : A0)
      if (v.size() != dim) throw UsageError("HermiteData: inconsistent dimensions");
    for (const auto& v : A1)
      if (v.size() != dim) throw UsageError("HermiteData: inconsistent dimensions");
  }

  int dim() const { return static_cast<int>(A0[0].size()); }

  int n = 0;
  double h = 0.0;
  std::vector<std::vector<T>> A0, A1;
};

/// Polynomial q_d as monomial coefficients in u = t/h.
template <class T = double>
class PolynomialCurve {
 public:
  PolynomialCurve() = default;  // empty placeholder
  PolynomialCurve(int dim, int degree, double h)
      : dim_(dim), degree_(degree), h_(h), c_(static_cast<size_t>(degree + 1) * dim) {}

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  double step() const { return h_; }

  T& coeff(int k, int i) { return c_[static_cast<size_t>(k) * dim_ + i]; }
  const T& coeff(int k, int i) const { return c_[static_cast<size_t>(k) * dim_ + i]; }

  bool in_domain(double t) const {
    const double u = t / h_;
    return u >= 0.0 && u <= 1.0;
  }

  /// r-th time derivative at t.  Evaluation outside [0, h] is legitimate
  /// (dense output may extrapolate slightly); in_domain() reports it.
  std::vector<T> eval_deriv(double t, int r) const {
    if (r < 0) throw UsageError("PolynomialCurve: negative derivative order");
    const double u = t / h_;
    std::vector<T> acc(static_cast<size_t>(dim_));
    for (auto& x : acc) x = zero_like(c_[0]);
    for (int k = degree_; k >= r; --k) {
      double perm = 1.0;  // k (k-1) ... (k-r+1)
      for (int i = 0; i < r; ++i) perm *= (k - i);
      for (int i = 0; i < dim_; ++i) acc[static_cast<size_t>(i)] = acc[static_cast<size_t>(i)] * u + perm * coeff(k, i);
    }
    double hr = 1.0;
    for (int i = 0; i < r; ++i) hr *= h_;
    for (auto& x : acc) x = (1.0 / hr) * x;
    return acc;
  }

  std::vector<T> eval(double t) const { return eval_deriv(t, 0); }

 private:
  int dim_ = 0;
  int degree_ = -1;
  double h_ = 0.0;
  std::vector<T> c_;
};

/// Assemble the degree-(2n-1) interpolant from endpoint derivative data.
template <class T>
PolynomialCurve<T> assemble(const HermiteData<T>& data) {
  const int n = data.n;
  const int dim = data.dim();
  PolynomialCurve<T> curve(dim, 2 * n - 1, data.h);
  double scale = 1.0;  // h^j / j!
  for (int j = 0; j < n; ++j) {
    if (j > 0) scale *= data.h / j;
    const detail::IPoly base = detail::hermite_basis_upoly(n, j);
    const detail::IPoly mirror = detail::ipoly_reflect(base);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (size_t k = 0; k < base.size() && k <= static_cast<size_t>(2 * n - 1); ++k) {
      const double wb = scale * static_cast<double>(base[k]);
      const double wm = sign * scale * static_cast<double>(mirror[k]);
      for (int i = 0; i < dim; ++i) {
        const T& a0 = data.A0[static_cast<size_t>(j)][static_cast<size_t>(i)];
        const T& a1 = data.A1[static_cast<size_t>(j)][static_cast<size_t>(i)];
        curve.coeff(static_cast<int>(k), i) = curve.coeff(static_cast<int>(k), i) + wb * a0 + wm * a1;
      }
    }
  }
  return curve;
}

}  // namespace hem
