#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace visreg {

template <int Dim>
using Vec = std::array<double, Dim>;

/// Second-order tensor, t[i][j]. Gradients follow (grad u)_ij = d_i u_j.
template <int Dim>
using Tensor = std::array<std::array<double, Dim>, Dim>;

template <int Dim>
constexpr double dot(const Vec<Dim>& a, const Vec<Dim>& b) {
  double r = 0.0;
  for (int i = 0; i < Dim; ++i) r += a[i] * b[i];
  return r;
}

template <int Dim>
constexpr double norm2(const Vec<Dim>& a) {
  return dot<Dim>(a, a);
}

template <int Dim>
constexpr Vec<Dim> axpy(double alpha, const Vec<Dim>& x, const Vec<Dim>& y) {
  Vec<Dim> r{};
  for (int i = 0; i < Dim; ++i) r[i] = alpha * x[i] + y[i];
  return r;
}

template <int Dim>
constexpr Vec<Dim> scaled(double alpha, const Vec<Dim>& x) {
  Vec<Dim> r{};
  for (int i = 0; i < Dim; ++i) r[i] = alpha * x[i];
  return r;
}

/// Double contraction g:h = g_ij h_ij.
template <int Dim>
constexpr double contract(const Tensor<Dim>& g, const Tensor<Dim>& h) {
  double r = 0.0;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) r += g[i][j] * h[i][j];
  return r;
}

template <int Dim>
constexpr Tensor<Dim> outer(const Vec<Dim>& a, const Vec<Dim>& b) {
  Tensor<Dim> r{};
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) r[i][j] = a[i] * b[j];
  return r;
}

template <int Dim>
constexpr Tensor<Dim> symmetric_part(const Tensor<Dim>& g) {
  Tensor<Dim> r{};
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) r[i][j] = 0.5 * (g[i][j] + g[j][i]);
  return r;
}

template <int Dim>
constexpr double trace(const Tensor<Dim>& g) {
  double r = 0.0;
  for (int i = 0; i < Dim; ++i) r += g[i][i];
  return r;
}

/// (g.a)_i = g_ij a_j
template <int Dim>
constexpr Vec<Dim> apply(const Tensor<Dim>& g, const Vec<Dim>& a) {
  Vec<Dim> r{};
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) r[i] += g[i][j] * a[j];
  return r;
}

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  constexpr double det() const { return a11 * a22 - a12 * a12; }
  constexpr double trace() const { return a11 + a22; }

  /// x^T A x for x = (x1, x2).
  constexpr double quad(double x1, double x2) const {
    return a11 * x1 * x1 + 2.0 * a12 * x1 * x2 + a22 * x2 * x2;
  }

  /// Block quadratic form (X, Y) N (X, Y)^T where every block is a multiple
  /// of the identity in R^Dim.
  template <int Dim>
  constexpr double quad(const Vec<Dim>& x, const Vec<Dim>& y) const {
    return a11 * dot<Dim>(x, x) + 2.0 * a12 * dot<Dim>(x, y) + a22 * dot<Dim>(y, y);
  }

  /// Eigenvalues, smallest first.
  std::array<double, 2> eigenvalues() const {
    const double mean = 0.5 * (a11 + a22);
    const double half_diff = 0.5 * (a11 - a22);
    const double r = std::hypot(half_diff, a12);
    return {mean - r, mean + r};
  }

  /// Unit eigenvector of the largest eigenvalue.
  std::array<double, 2> top_eigenvector() const {
    const double lmax = eigenvalues()[1];
    // Rows of (A - lmax I) are orthogonal to the eigenvector; use the
    // better-conditioned one.
    const double r1x = a11 - lmax, r1y = a12;
    const double r2x = a12, r2y = a22 - lmax;
    double vx, vy;
    if (std::hypot(r1x, r1y) >= std::hypot(r2x, r2y)) {
      vx = -r1y;
      vy = r1x;
    } else {
      vx = -r2y;
      vy = r2x;
    }
    const double n = std::hypot(vx, vy);
    if (n == 0.0) return {1.0, 0.0};  // multiple of the identity
    return {vx / n, vy / n};
  }
};

}  // namespace visreg
