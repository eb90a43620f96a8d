#pragma once

#include "degtherm/common.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace degtherm {

/// Uniform node-centered grid on an axis-aligned rectangle. Nodes (i, j) with
/// 0 <= i <= nx, 0 <= j <= ny sit at (x0 + i dx, y0 + j dy).
class Grid2D {
 public:
  Grid2D(Index nx, Index ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0);

  /// nx by ny cells covering [x0, x0 + lx] x [y0, y0 + ly].
  static Grid2D rectangle(double lx, double ly, Index nx, Index ny, double x0 = 0.0,
                          double y0 = 0.0);
  /// Unit square with n nodes per side.
  static Grid2D unit_square_nodes(Index n) { return rectangle(1.0, 1.0, n - 1, n - 1); }

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double lx() const { return static_cast<double>(nx_) * dx_; }
  double ly() const { return static_cast<double>(ny_) * dy_; }
  double h_min() const { return std::min(dx_, dy_); }
  double diameter() const { return std::hypot(lx(), ly()); }
  double cell_area() const { return dx_ * dy_; }

  Index nodes_x() const { return nx_ + 1; }
  Index nodes_y() const { return ny_ + 1; }
  Index num_nodes() const { return (nx_ + 1) * (ny_ + 1); }
  Index node(Index i, Index j) const { return j * (nx_ + 1) + i; }
  double x(Index i) const { return x0_ + static_cast<double>(i) * dx_; }
  double y(Index j) const { return y0_ + static_cast<double>(j) * dy_; }
  bool is_boundary(Index i, Index j) const {
    return i == 0 || j == 0 || i == nx_ || j == ny_;
  }
  bool contains(Index i, Index j) const { return i >= 0 && j >= 0 && i <= nx_ && j <= ny_; }

  /// Area of the dual cell of node (i, j) clipped to the rectangle.
  double node_measure(Index i, Index j) const {
    const double wx = (i == 0 || i == nx_) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == ny_) ? 0.5 : 1.0;
    return wx * wy * dx_ * dy_;
  }

  bool operator==(const Grid2D&) const = default;

 private:
  Index nx_;
  Index ny_;
  double dx_;
  double dy_;
  double x0_;
  double y0_;
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Node-sampled scalar on a grid, row-major (x fastest).
template <typename Scalar>
struct BasicScalarField {
  Grid2D grid;
  VectorX<Scalar> values;
  double t = 0.0;

  explicit BasicScalarField(const Grid2D& g, Scalar fill = Scalar(0), double time = 0.0)
      : grid(g), values(VectorX<Scalar>::Constant(g.num_nodes(), fill)), t(time) {}
  BasicScalarField(const Grid2D& g, VectorX<Scalar> v, double time)
      : grid(g), values(std::move(v)), t(time) {
    if (values.size() != grid.num_nodes()) throw DomainError("field size does not match grid");
  }

  template <typename Fn>
  static BasicScalarField sample(const Grid2D& g, Fn&& fn, double time = 0.0) {
    BasicScalarField f(g, Scalar(0), time);
    for (Index j = 0; j <= g.ny(); ++j)
      for (Index i = 0; i <= g.nx(); ++i) f(i, j) = fn(g.x(i), g.y(j));
    return f;
  }

  Scalar& operator()(Index i, Index j) { return values[grid.node(i, j)]; }
  const Scalar& operator()(Index i, Index j) const { return values[grid.node(i, j)]; }
  bool all_finite() const { return values.allFinite(); }
  bool operator==(const BasicScalarField& o) const {
    return grid == o.grid && t == o.t && values == o.values;
  }
};

/// Values on x-faces (between (i,j) and (i+1,j)) and y-faces (between (i,j) and (i,j+1)).
template <typename Scalar>
struct BasicFaceField {
  Grid2D grid;
  VectorX<Scalar> fx;  // index j * nx + i, 0 <= i < nx, 0 <= j <= ny
  VectorX<Scalar> fy;  // index j * (nx + 1) + i, 0 <= i <= nx, 0 <= j < ny

  explicit BasicFaceField(const Grid2D& g, Scalar fill = Scalar(0))
      : grid(g),
        fx(VectorX<Scalar>::Constant(g.nx() * (g.ny() + 1), fill)),
        fy(VectorX<Scalar>::Constant((g.nx() + 1) * g.ny(), fill)) {}

  Scalar& x_face(Index i, Index j) { return fx[j * grid.nx() + i]; }
  const Scalar& x_face(Index i, Index j) const { return fx[j * grid.nx() + i]; }
  Scalar& y_face(Index i, Index j) { return fy[j * (grid.nx() + 1) + i]; }
  const Scalar& y_face(Index i, Index j) const { return fy[j * (grid.nx() + 1) + i]; }
};

using ScalarField = BasicScalarField<double>;
using FaceVectorField = BasicFaceField<double>;

/// Snapshots at t = k dt for k = 0, 1, ...
struct SpaceTimeField {
  Grid2D grid;
  double dt;
  std::vector<ScalarField> levels;

  SpaceTimeField(const Grid2D& g, double step) : grid(g), dt(step) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
  }
  void push_back(ScalarField level);
  Index num_levels() const { return static_cast<Index>(levels.size()); }
  double time(Index k) const { return levels[static_cast<std::size_t>(k)].t; }
  /// Levels with t <= horizon (plus round-off), sharing storage semantics by copy.
  SpaceTimeField prefix(double horizon) const;
};

/// Forward difference on every face. Exact for affine fields.
template <typename Scalar>
BasicFaceField<Scalar> gradient(const BasicScalarField<Scalar>& f) {
  const Grid2D& g = f.grid;
  BasicFaceField<Scalar> out(g);
  const Scalar inv_dx = Scalar(1) / Scalar(g.dx());
  const Scalar inv_dy = Scalar(1) / Scalar(g.dy());
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i < g.nx(); ++i) out.x_face(i, j) = (f(i + 1, j) - f(i, j)) * inv_dx;
  for (Index j = 0; j < g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) out.y_face(i, j) = (f(i, j + 1) - f(i, j)) * inv_dy;
  return out;
}

/// Negative adjoint of gradient on interior nodes; boundary nodes are set to 0.
template <typename Scalar>
BasicScalarField<Scalar> divergence(const BasicFaceField<Scalar>& F) {
  const Grid2D& g = F.grid;
  BasicScalarField<Scalar> out(g);
  const Scalar inv_dx = Scalar(1) / Scalar(g.dx());
  const Scalar inv_dy = Scalar(1) / Scalar(g.dy());
  for (Index j = 1; j < g.ny(); ++j)
    for (Index i = 1; i < g.nx(); ++i)
      out(i, j) = (F.x_face(i, j) - F.x_face(i - 1, j)) * inv_dx +
                  (F.y_face(i, j) - F.y_face(i, j - 1)) * inv_dy;
  return out;
}

/// Sum over nodes of f g dx dy.
template <typename Scalar>
Scalar node_inner(const BasicScalarField<Scalar>& f, const BasicScalarField<Scalar>& g) {
  return f.values.dot(g.values) * Scalar(f.grid.cell_area());
}

/// Sum over faces of F G dx dy.
template <typename Scalar>
Scalar face_inner(const BasicFaceField<Scalar>& F, const BasicFaceField<Scalar>& G) {
  return (F.fx.dot(G.fx) + F.fy.dot(G.fy)) * Scalar(F.grid.cell_area());
}

/// Face value average onto nodes: each node takes the mean of its incident faces
/// along each axis, summed over the two axes. Used for face energies |F|^2.
ScalarField face_energy_to_nodes(const FaceVectorField& squared);

/// Sub-grid covering node index box [i0, i1] x [j0, j1].
Grid2D subgrid(const Grid2D& g, Index i0, Index i1, Index j0, Index j1);
ScalarField restrict_field(const ScalarField& f, Index i0, Index i1, Index j0, Index j1);
SpaceTimeField restrict_field(const SpaceTimeField& f, Index i0, Index i1, Index j0, Index j1);

// ---------------------------------------------------------------------------
// Windows

struct BallWindow {
  Index ci;
  Index cj;
  double radius;
  bool operator==(const BallWindow&) const = default;
};

struct CylinderWindow {
  Index ci;
  Index cj;
  Index ck;  // time level index of the cylinder top
  double radius;
  bool operator==(const CylinderWindow&) const = default;
};

struct WindowPolicy {
  enum class Radii { Dyadic, Linear };

  Index stride = 1;
  double r_min = 0.0;  // 0 means 2 min(dx, dy)
  double r_max = 0.0;  // 0 means min(lx, ly) / 2
  Radii radii = Radii::Dyadic;
  Index time_stride = 1;  // cylinder tops every time_stride levels

  /// Stride 1, all radii 2h, 3h, ... up to r_max.
  static WindowPolicy exhaustive(double r_max = 0.0) {
    WindowPolicy p;
    p.radii = Radii::Linear;
    p.r_max = r_max;
    return p;
  }
  /// Stride max(1, nx / 32) and dyadic radii.
  static WindowPolicy sampled(const Grid2D& g, double r_max = 0.0) {
    WindowPolicy p;
    p.stride = std::max<Index>(1, g.nx() / 32);
    p.r_max = r_max;
    return p;
  }
};

/// Radii the policy generates on this grid, ascending. Throws if empty.
std::vector<double> window_radii(const Grid2D& g, const WindowPolicy& policy);

/// Ordered by radius, then j, then i. Throws DomainError for an empty family.
std::vector<BallWindow> enumerate_windows(const Grid2D& g, const WindowPolicy& policy);

/// Cylinders Q_R = B_R x (t_k - R^2, t_k] for tops k = time_stride, 2 time_stride, ...
std::vector<CylinderWindow> enumerate_cylinders(const Grid2D& g, Index num_levels,
                                                const WindowPolicy& policy);

/// Level index range [first, last] of a cylinder: t_top - R^2 < t_k <= t_top, k >= 1.
inline std::pair<Index, Index> cylinder_levels(double dt, const CylinderWindow& w) {
  const double span = w.radius * w.radius / dt;
  const auto count = static_cast<Index>(std::ceil(span - 1e-9));
  return {std::max<Index>(1, w.ck - count + 1), w.ck};
}

/// Row half-widths of the lattice disc {(a dx)^2 + (b dy)^2 < R^2}: for row
/// offset b in [-rows, rows], columns a in [-half[b + rows], half[b + rows]].
struct DiscStencil {
  Index rows = 0;
  std::vector<Index> half;
  Index lattice_count = 0;  // number of lattice points in the full disc

  DiscStencil(const Grid2D& g, double radius);
  Index half_width(Index b) const { return half[static_cast<std::size_t>(b + rows)]; }
};

/// Number of member nodes of the window inside the grid.
Index window_member_count(const Grid2D& g, const BallWindow& w);

// ---------------------------------------------------------------------------
// Snapshot files: header `FIELD nx ny dx dy x0 y0 t`, then ny+1 rows of nx+1 values.

void write_snapshot(std::ostream& os, const ScalarField& f);
ScalarField read_snapshot(std::istream& is);
void write_snapshot_file(const std::string& path, const ScalarField& f);
ScalarField read_snapshot_file(const std::string& path);

}  // namespace degtherm
