#pragma once

// Small dense linear algebra.  Problem sizes here are tiny (state dimensions
// and 2x/3x multiples of them for Newton systems), and the right-hand sides
// are frequently jets or duals rather than doubles, so this is hand-rolled:
// a double matrix applied to vectors of any scalar type, plus a pivoted LU
// for the double Newton systems.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hem/errors.hpp"
#include "hem/scalar.hpp"

namespace hem {

using Vec = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  /// y = A x for x with entries of any scalar type.
  template <class T>
  std::vector<T> apply(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw UsageError("Matrix::apply: size mismatch");
    std::vector<T> y;
    y.reserve(rows_);
    for (int i = 0; i < rows_; ++i) {
      T acc = zero_like(x[0]);
      for (int j = 0; j < cols_; ++j) acc = acc + (*this)(i, j) * x[j];
      y.push_back(acc);
    }
    return y;
  }

  bool symmetric(double tol = 1e-12) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Solve A x = b by LU with partial pivoting.  Throws SolverError on a
/// (numerically) singular matrix.
inline Vec solve_linear(Matrix a, Vec b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw UsageError("solve_linear: shape mismatch");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) < 1e-300)
      throw SolverError("solve_linear: singular matrix", 0, 0.0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double l = a(i, k) / a(k, k);
      a(i, k) = l;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
      b[i] -= l * b[k];
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline Matrix inverse(const Matrix& a) {
  const int n = a.rows();
  Matrix inv(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    Vec col = solve_linear(a, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// Vector helpers over generic scalars.

template <class T>
std::vector<T> vec_add(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

template <class T>
std::vector<T> vec_sub(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
  return r;
}

template <class T>
std::vector<T> vec_scale(double s, const std::vector<T>& a) {
  std::vector<T> r = a;
  for (auto& x : r) x = s * x;
  return r;
}

inline double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct NewtonResult {
  Vec x;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Damped-free Newton iteration on F(x) = 0.  `fj` returns the residual and
/// its Jacobian at x.  Converged when the residual inf-norm drops below tol.
inline NewtonResult newton_solve(const std::function<std::pair<Vec, Matrix>(const Vec&)>& fj,
                                 Vec x, double tol, int max_iter, const char* label) {
  double rnorm = 0.0;
  for (int it = 0; it <= max_iter; ++it) {
    auto [r, jac] = fj(x);
    rnorm = norm_inf(r);
    if (!std::isfinite(rnorm))
      throw SolverError(std::string(label) + ": residual is not finite", it, rnorm);
    if (rnorm < tol) return {x, it, rnorm};
    if (it == max_iter) break;
    Vec step = solve_linear(jac, vec_scale(-1.0, r));
    x = vec_add(x, step);
  }
  throw SolverError(std::string(label) + ": no convergence after " + std::to_string(max_iter) +
                        " iterations (residual " + std::to_string(rnorm) + ")",
                    max_iter, rnorm);
}

}  // namespace hem
