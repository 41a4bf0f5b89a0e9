#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "visreg/errors.hpp"
#include "visreg/linalg.hpp"

namespace visreg {

enum class Boundary { Periodic, Farfield };

inline std::string to_string(Boundary b) { return b == Boundary::Periodic ? "periodic" : "farfield"; }

inline Boundary parse_boundary(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "farfield") return Boundary::Farfield;
  throw BadParams("unknown boundary '" + s + "'");
}

/// Uniform cell-centred grid on [lo, hi] per axis.
template <int Dim>
struct Grid {
  static_assert(Dim == 1 || Dim == 2, "only 1D and 2D grids");

  std::array<int, Dim> n{};
  std::array<double, Dim> lo{};
  std::array<double, Dim> hi{};
  Boundary boundary = Boundary::Periodic;

  static Grid uniform(int cells, double lo_, double hi_, Boundary b) {
    Grid g;
    for (int k = 0; k < Dim; ++k) {
      g.n[k] = cells;
      g.lo[k] = lo_;
      g.hi[k] = hi_;
    }
    g.boundary = b;
    g.validate();
    return g;
  }

  void validate() const {
    for (int k = 0; k < Dim; ++k) {
      if (n[k] < 4) throw BadParams("grid needs at least 4 cells per axis");
      if (!(hi[k] > lo[k])) throw BadParams("grid extent must be positive");
    }
  }

  double h(int k) const { return (hi[k] - lo[k]) / n[k]; }
  double h_min() const {
    double r = h(0);
    for (int k = 1; k < Dim; ++k) r = std::min(r, h(k));
    return r;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < Dim; ++k) v *= h(k);
    return v;
  }
  int nx() const { return n[0]; }
  int ny() const {
    if constexpr (Dim == 2) return n[1];
    return 1;
  }
  int cells() const { return nx() * ny(); }
  int index(int i, int j = 0) const { return i + nx() * j; }

  double center(int k, int i) const { return lo[k] + (i + 0.5) * h(k); }
  Vec<Dim> center_of(int c) const {
    Vec<Dim> x{};
    x[0] = center(0, c % nx());
    if constexpr (Dim == 2) x[1] = center(1, c / nx());
    return x;
  }

  /// Same extent and boundary, cells multiplied by `factor` per axis.
  Grid refined(int factor) const {
    Grid g = *this;
    for (int k = 0; k < Dim; ++k) g.n[k] *= factor;
    return g;
  }
};

/// Ghost values in the padded layout (one layer, corners included) used for
/// farfield boundaries. Built once from the initial field.
struct FarfieldGhosts {
  std::vector<double> rho;
  std::vector<std::vector<double>> m;
  std::vector<double> E;
};

template <int Dim>
struct ConservedField {
  Grid<Dim> grid;
  double t = 0.0;
  std::vector<double> rho;
  std::array<std::vector<double>, Dim> m;
  std::vector<double> E;
  std::shared_ptr<const FarfieldGhosts> farfield;

  static ConservedField zeros(const Grid<Dim>& g) {
    ConservedField f;
    f.grid = g;
    const auto n = static_cast<std::size_t>(g.cells());
    f.rho.assign(n, 0.0);
    for (auto& mk : f.m) mk.assign(n, 0.0);
    f.E.assign(n, 0.0);
    return f;
  }

  int cells() const { return grid.cells(); }

  Vec<Dim> velocity(int c) const {
    Vec<Dim> u{};
    for (int k = 0; k < Dim; ++k) u[k] = m[k][c] / rho[c];
    return u;
  }
  double internal_energy(int c) const {
    double ke = 0.0;
    for (int k = 0; k < Dim; ++k) ke += m[k][c] * m[k][c];
    return E[c] / rho[c] - 0.5 * ke / (rho[c] * rho[c]);
  }

  /// this += alpha * other, component-wise (time and ghosts untouched).
  void add_scaled(double alpha, const ConservedField& other) {
    const int n = cells();
    for (int c = 0; c < n; ++c) {
      rho[c] += alpha * other.rho[c];
      E[c] += alpha * other.E[c];
    }
    for (int k = 0; k < Dim; ++k)
      for (int c = 0; c < n; ++c) m[k][c] += alpha * other.m[k][c];
  }

  /// Linear combination wa * A + wb * B on matching grids.
  static ConservedField combine(double wa, const ConservedField& A, double wb, const ConservedField& B) {
    ConservedField r = A;
    const int n = A.cells();
    for (int c = 0; c < n; ++c) {
      r.rho[c] = wa * A.rho[c] + wb * B.rho[c];
      r.E[c] = wa * A.E[c] + wb * B.E[c];
    }
    for (int k = 0; k < Dim; ++k)
      for (int c = 0; c < n; ++c) r.m[k][c] = wa * A.m[k][c] + wb * B.m[k][c];
    return r;
  }

  /// Sums of rho, m_k, E times the cell volume.
  std::array<double, Dim + 2> totals() const {
    std::array<double, Dim + 2> s{};
    const double v = grid.cell_volume();
    for (int c = 0; c < cells(); ++c) {
      s[0] += rho[c];
      for (int k = 0; k < Dim; ++k) s[1 + k] += m[k][c];
      s[Dim + 1] += E[c];
    }
    for (auto& x : s) x *= v;
    return s;
  }
};

namespace detail {

/// Padded cell layout: one ghost layer on every side (none along y in 1D).
template <int Dim>
struct Layout {
  int nx, ny, px, py, jo;
  explicit Layout(const Grid<Dim>& g)
      : nx(g.nx()), ny(g.ny()), px(g.nx() + 2), py(Dim == 2 ? g.ny() + 2 : 1), jo(Dim == 2 ? 1 : 0) {}
  int size() const { return px * py; }
  int at(int i, int j = 0) const { return (i + 1) + px * (j + jo); }
  int stride(int k) const { return k == 0 ? 1 : px; }
  bool interior(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
};

inline int wrap(int i, int n) { return ((i % n) + n) % n; }
inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

/// Copies `src` (interior) into padded array `dst`, filling ghosts.
/// `ghost` supplies farfield ghost values in padded layout, or nullptr for
/// zero-gradient clamping.
template <int Dim>
void pad(const Grid<Dim>& g, const std::vector<double>& src, const std::vector<double>* ghost,
         std::vector<double>& dst) {
  const Layout<Dim> L(g);
  dst.resize(static_cast<std::size_t>(L.size()));
  const int jlo = Dim == 2 ? -1 : 0, jhi = Dim == 2 ? L.ny : 0;
  for (int j = jlo; j <= jhi; ++j) {
    for (int i = -1; i <= L.nx; ++i) {
      const int p = L.at(i, j);
      if (L.interior(i, j)) {
        dst[p] = src[g.index(i, j)];
      } else if (g.boundary == Boundary::Periodic) {
        dst[p] = src[g.index(wrap(i, L.nx), Dim == 2 ? wrap(j, L.ny) : 0)];
      } else if (ghost) {
        dst[p] = (*ghost)[p];
      } else {
        dst[p] = src[g.index(clamp_index(i, L.nx), Dim == 2 ? clamp_index(j, L.ny) : 0)];
      }
    }
  }
}

}  // namespace detail

/// Freezes the current boundary values as farfield ghost states.
template <int Dim>
void attach_farfield(ConservedField<Dim>& f) {
  auto g = std::make_shared<FarfieldGhosts>();
  detail::pad<Dim>(f.grid, f.rho, nullptr, g->rho);
  g->m.resize(Dim);
  for (int k = 0; k < Dim; ++k) detail::pad<Dim>(f.grid, f.m[k], nullptr, g->m[k]);
  detail::pad<Dim>(f.grid, f.E, nullptr, g->E);
  f.farfield = std::move(g);
}

}  // namespace visreg
