#pragma once

// Test-side reference implementations. Each one is written directly from the
// definitions with plain loops and shares no code with the library kernels.

#include "degtherm/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using degtherm::Grid2D;
using degtherm::Index;
using degtherm::ScalarField;

inline double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Dense assembly and LU solve of -div(a grad phi) = s with phi = boundary.
inline ScalarField dense_elliptic(const ScalarField& a, const ScalarField& boundary,
                                  const ScalarField* s = nullptr) {
  const Grid2D& g = a.grid;
  const Index nx = g.nx(), ny = g.ny();
  const Index n = (nx - 1) * (ny - 1);
  auto id = [&](Index i, Index j) { return (j - 1) * (nx - 1) + (i - 1); };
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  const double hx2 = g.dx() * g.dx(), hy2 = g.dy() * g.dy();
  for (Index j = 1; j < ny; ++j)
    for (Index i = 1; i < nx; ++i) {
      const Index r = id(i, j);
      if (s) b[r] += (*s)(i, j);
      const Index ni[4] = {i - 1, i + 1, i, i};
      const Index nj[4] = {j, j, j - 1, j + 1};
      for (int q = 0; q < 4; ++q) {
        const double h2 = q < 2 ? hx2 : hy2;
        const double c = harmonic(a(i, j), a(ni[q], nj[q])) / h2;
        A(r, r) += c;
        if (g.is_boundary(ni[q], nj[q])) b[r] += c * boundary(ni[q], nj[q]);
        else A(r, id(ni[q], nj[q])) -= c;
      }
    }
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  ScalarField phi = boundary;
  for (Index j = 1; j < ny; ++j)
    for (Index i = 1; i < nx; ++i) phi(i, j) = x[id(i, j)];
  return phi;
}

// Series solution of -Lap phi = 1 on the unit square, phi = 0 on the boundary.
inline double poisson_center_series(int terms = 401) {
  const double pi = std::numbers::pi;
  double sum = 0.0;
  for (int m = 1; m <= terms; m += 2)
    for (int n = 1; n <= terms; n += 2) {
      const double coef = 16.0 / (pi * pi * m * n * pi * pi * (m * m + n * n));
      sum += coef * std::sin(m * pi / 2) * std::sin(n * pi / 2);
    }
  return sum;
}

// Members of the disc of radius R about node (ci, cj): |offset| < R strictly,
// with lattice points on the circle excluded despite rounding.
template <typename Fn>
void disc_nodes(const Grid2D& g, Index ci, Index cj, double R, Fn&& fn) {
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) {
      const double dx = (i - ci) * g.dx(), dy = (j - cj) * g.dy();
      if (dx * dx + dy * dy < R * R * (1.0 - 1e-9)) fn(i, j);
    }
}

// Mean oscillation of f over the clipped disc, dual-cell weighted.
inline double mean_oscillation(const ScalarField& f, Index ci, Index cj, double R) {
  const Grid2D& g = f.grid;
  double m = 0.0, s = 0.0;
  disc_nodes(g, ci, cj, R, [&](Index i, Index j) {
    m += g.node_measure(i, j);
    s += g.node_measure(i, j) * f(i, j);
  });
  const double mean = s / m;
  double osc = 0.0;
  disc_nodes(g, ci, cj, R, [&](Index i, Index j) {
    osc += g.node_measure(i, j) * std::abs(f(i, j) - mean);
  });
  return osc / m;
}

// Every node a center, radii 2h, 3h, ... up to r_max, no extension.
inline double bmo_exhaustive(const ScalarField& f, double r_max) {
  const Grid2D& g = f.grid;
  double best = 0.0;
  for (Index k = 2; k * g.dx() <= r_max * (1 + 1e-12); ++k)
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i) best = std::max(best, mean_oscillation(f, i, j, k * g.dx()));
  return best;
}

inline ScalarField random_field(const Grid2D& g, unsigned seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField f(g);
  for (Index k = 0; k < g.num_nodes(); ++k) f.values[k] = d(rng);
  return f;
}

}  // namespace oracle

namespace oracle {

// Mean oscillation with f extended by c outside the domain: every lattice point
// of the disc carries one cell, split between its clipped in-domain part and c.
inline double mean_oscillation_ext(const ScalarField& f, Index ci, Index cj, double R, double c) {
  const Grid2D& g = f.grid;
  const Index ra = static_cast<Index>(R / g.dx()) + 1, rb = static_cast<Index>(R / g.dy()) + 1;
  struct Part {
    double w, v;
  };
  std::vector<Part> parts;
  for (Index b = -rb; b <= rb; ++b)
    for (Index a = -ra; a <= ra; ++a) {
      const double dx = a * g.dx(), dy = b * g.dy();
      if (!(dx * dx + dy * dy < R * R * (1.0 - 1e-9))) continue;
      const Index i = ci + a, j = cj + b;
      double w = 0.0, v = 0.0;
      if (g.contains(i, j)) {
        w = g.node_measure(i, j) / g.cell_area();
        v = f(i, j);
      }
      parts.push_back({w, v});
      if (w < 1.0) parts.push_back({1.0 - w, c});
    }
  double m = 0.0, s = 0.0;
  for (const auto& p : parts) m += p.w, s += p.w * p.v;
  const double mean = s / m;
  double osc = 0.0;
  for (const auto& p : parts) osc += p.w * std::abs(p.v - mean);
  return osc / m;
}

inline double bmo_exhaustive_ext(const ScalarField& f, double r_max, double c) {
  const Grid2D& g = f.grid;
  double best = 0.0;
  for (Index k = 2; k * g.dx() <= r_max * (1 + 1e-12); ++k)
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i)
        best = std::max(best, mean_oscillation_ext(f, i, j, k * g.dx(), c));
  return best;
}

// All pairs of the space-time lattice, parabolic distance |dx|^alpha + |dt|^{alpha/2}.
inline double holder_naive(const degtherm::SpaceTimeField& f, double alpha) {
  const Grid2D& g = f.grid;
  double best = 0.0;
  const Index n = g.num_nodes();
  for (Index k1 = 0; k1 < f.num_levels(); ++k1)
    for (Index k2 = 0; k2 < f.num_levels(); ++k2)
      for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) {
          if (k1 == k2 && p == q) continue;
          const Index i1 = p % (g.nx() + 1), j1 = p / (g.nx() + 1);
          const Index i2 = q % (g.nx() + 1), j2 = q / (g.nx() + 1);
          const double d = std::hypot((i1 - i2) * g.dx(), (j1 - j2) * g.dy());
          const double den = std::pow(d, alpha) + std::pow(std::abs(k1 - k2) * f.dt, alpha / 2);
          best = std::max(best, std::abs(f.levels[k1].values[p] - f.levels[k2].values[q]) / den);
        }
  return best;
}

}  // namespace oracle
