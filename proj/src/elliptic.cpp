#include "degtherm/elliptic.hpp"

#include <cmath>
#include <vector>

namespace degtherm {

FaceVectorField face_coefficients(const ScalarField& a, FaceAveraging averaging) {
  const Grid2D& g = a.grid;
  FaceVectorField out(g);
  auto mean = [averaging](double l, double r) {
    if (averaging == FaceAveraging::Arithmetic) return 0.5 * (l + r);
    return 2.0 * l * r / (l + r);
  };
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i < g.nx(); ++i) out.x_face(i, j) = mean(a(i, j), a(i + 1, j));
  for (Index j = 0; j < g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i) out.y_face(i, j) = mean(a(i, j), a(i, j + 1));
  return out;
}

DiffusionOperator::DiffusionOperator(FaceVectorField coefficients, double shift)
    : coef_(std::move(coefficients)), shift_(shift) {
  const Grid2D& g = coef_.grid;
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const Index n = num_unknowns();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n));
  inv_diag_.resize(n);
  for (Index j = 1; j < g.ny(); ++j) {
    for (Index i = 1; i < g.nx(); ++i) {
      const Index row = unknown(i, j);
      const double w = coef_.x_face(i - 1, j) * ix2;
      const double e = coef_.x_face(i, j) * ix2;
      const double s = coef_.y_face(i, j - 1) * iy2;
      const double nn = coef_.y_face(i, j) * iy2;
      const double diag = shift_ + w + e + s + nn;
      if (j > 1) trip.emplace_back(row, unknown(i, j - 1), -s);
      if (i > 1) trip.emplace_back(row, unknown(i - 1, j), -w);
      trip.emplace_back(row, row, diag);
      if (i + 1 < g.nx()) trip.emplace_back(row, unknown(i + 1, j), -e);
      if (j + 1 < g.ny()) trip.emplace_back(row, unknown(i, j + 1), -nn);
      inv_diag_[row] = 1.0 / diag;
    }
  }
  matrix_.resize(n, n);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
}

Eigen::VectorXd DiffusionOperator::apply_full(const ScalarField& w) const {
  const Grid2D& g = grid();
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  Eigen::VectorXd out(num_unknowns());
  for (Index j = 1; j < g.ny(); ++j) {
    for (Index i = 1; i < g.nx(); ++i) {
      const double c = w(i, j);
      out[unknown(i, j)] = (coef_.x_face(i - 1, j) * (c - w(i - 1, j)) +
                            coef_.x_face(i, j) * (c - w(i + 1, j))) *
                               ix2 +
                           (coef_.y_face(i, j - 1) * (c - w(i, j - 1)) +
                            coef_.y_face(i, j) * (c - w(i, j + 1))) *
                               iy2;
    }
  }
  return out;
}

Eigen::VectorXd DiffusionOperator::boundary_rhs(const ScalarField& w) const {
  const Grid2D& g = grid();
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_unknowns());
  for (Index j = 1; j < g.ny(); ++j) {
    for (Index i = 1; i < g.nx(); ++i) {
      double b = 0.0;
      if (i == 1) b += coef_.x_face(0, j) * ix2 * w(0, j);
      if (i + 1 == g.nx()) b += coef_.x_face(i, j) * ix2 * w(g.nx(), j);
      if (j == 1) b += coef_.y_face(i, 0) * iy2 * w(i, 0);
      if (j + 1 == g.ny()) b += coef_.y_face(i, j) * iy2 * w(i, g.ny());
      out[unknown(i, j)] = b;
    }
  }
  return out;
}

Eigen::VectorXd DiffusionOperator::gather_interior(const ScalarField& f) const {
  const Grid2D& g = grid();
  Eigen::VectorXd out(num_unknowns());
  for (Index j = 1; j < g.ny(); ++j)
    for (Index i = 1; i < g.nx(); ++i) out[unknown(i, j)] = f(i, j);
  return out;
}

void DiffusionOperator::scatter_interior(const Eigen::VectorXd& v, ScalarField& f) const {
  const Grid2D& g = grid();
  for (Index j = 1; j < g.ny(); ++j)
    for (Index i = 1; i < g.nx(); ++i) f(i, j) = v[unknown(i, j)];
}

LinearSolveStats conjugate_gradient(const SparseMatrix& A, const Eigen::VectorXd& inv_diag,
                                    const Eigen::VectorXd& b, Eigen::VectorXd& x, double abs_tol,
                                    int max_iter) {
  LinearSolveStats st;
  Eigen::VectorXd r = b - A * x;
  double rnorm = r.norm();
  if (!std::isfinite(rnorm)) {
    st.residual_norm = rnorm;
    throw SolverError("conjugate gradient: non-finite residual", st);
  }
  if (rnorm <= abs_tol) {
    st.residual_norm = rnorm;
    return st;
  }
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(b.size());
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    Ap.noalias() = A * p;
    const double alpha = rz / p.dot(Ap);
    x.noalias() += alpha * p;
    r.noalias() -= alpha * Ap;
    rnorm = r.norm();
    st.iterations = it;
    st.residual_norm = rnorm;
    if (!std::isfinite(rnorm)) throw SolverError("conjugate gradient: non-finite residual", st);
    if (rnorm <= abs_tol) return st;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolverError("conjugate gradient: max_iter " + std::to_string(max_iter) +
                        " exceeded, residual " + format_double(rnorm),
                    st);
}

LinearSolveStats solve_interior(const DiffusionOperator& op, const Eigen::VectorXd& rhs,
                                Eigen::VectorXd& delta, double rhs_scale,
                                const CgOptions& options) {
  const Grid2D& g = op.grid();
  const int max_iter =
      options.max_iter > 0 ? options.max_iter : static_cast<int>(20 * (g.nx() + g.ny()));
  const double scale = rhs_scale > 0.0 ? rhs_scale : rhs.norm();
  delta = Eigen::VectorXd::Zero(op.num_unknowns());
  LinearSolveStats st;
  try {
    st = conjugate_gradient(op.matrix(), op.inverse_diagonal(), rhs, delta, options.rtol * scale,
                            max_iter);
  } catch (SolverError& e) {
    e.stats.rhs_norm = scale;
    e.stats.relative_residual = scale > 0.0 ? e.stats.residual_norm / scale : 0.0;
    throw;
  }
  st.rhs_norm = scale;
  st.relative_residual = scale > 0.0 ? st.residual_norm / scale : 0.0;
  return st;
}

DiffusionOperator assemble(const EllipticProblem& problem) {
  if (!(problem.a.grid == problem.boundary.grid))
    throw DomainError("elliptic problem fields must share one grid");
  if (!problem.a.all_finite() || !(problem.a.values.minCoeff() > 0.0))
    throw DomainError("elliptic coefficient must be positive and finite (a_min > 0)");
  return DiffusionOperator(face_coefficients(problem.a, problem.averaging), 0.0);
}

EllipticSolution solve(const EllipticProblem& problem, const CgOptions& options,
                       const ScalarField* initial_guess) {
  const DiffusionOperator op = assemble(problem);
  const Grid2D& g = problem.a.grid;

  // phi = w + delta with w carrying the Dirichlet data and the initial guess.
  ScalarField w = problem.boundary;
  if (initial_guess) {
    op.scatter_interior(op.gather_interior(*initial_guess), w);
  } else {
    op.scatter_interior(Eigen::VectorXd::Zero(op.num_unknowns()), w);
  }
  Eigen::VectorXd source = Eigen::VectorXd::Zero(op.num_unknowns());
  if (problem.s) source += op.gather_interior(*problem.s);
  if (problem.F) source += op.gather_interior(divergence(*problem.F));
  const double scale = (source + op.boundary_rhs(problem.boundary)).norm();
  const Eigen::VectorXd rhs = source - op.apply_full(w);

  Eigen::VectorXd delta;
  const LinearSolveStats st = solve_interior(op, rhs, delta, scale, options);
  EllipticSolution out{w, st};
  out.phi.t = problem.boundary.t;
  for (Index j = 1; j < g.ny(); ++j)
    for (Index i = 1; i < g.nx(); ++i) out.phi(i, j) += delta[op.unknown(i, j)];
  return out;
}

FaceVectorField face_energy_density(const ScalarField& a, const ScalarField& phi,
                                    FaceAveraging averaging) {
  FaceVectorField e = face_coefficients(a, averaging);
  const FaceVectorField grad = gradient(phi);
  e.fx.array() *= grad.fx.array().square();
  e.fy.array() *= grad.fy.array().square();
  return e;
}

namespace {

double ball_sum(const ScalarField& density, const BallWindow& w) {
  const Grid2D& g = density.grid;
  const DiscStencil disc(g, w.radius);
  double sum = 0.0;
  for (Index b = -disc.rows; b <= disc.rows; ++b) {
    const Index j = w.cj + b;
    const Index a = disc.half_width(b);
    if (j < 0 || j > g.ny() || a < 0) continue;
    const Index lo = std::max<Index>(0, w.ci - a);
    const Index hi = std::min<Index>(g.nx(), w.ci + a);
    for (Index i = lo; i <= hi; ++i) sum += density(i, j) * g.node_measure(i, j);
  }
  return sum;
}

}  // namespace

double weighted_dirichlet_energy(const ScalarField& a, const ScalarField& phi,
                                 const BallWindow& window, FaceAveraging averaging) {
  return ball_sum(face_energy_to_nodes(face_energy_density(a, phi, averaging)), window);
}

double weighted_dirichlet_energy(const SpaceTimeField& a, const SpaceTimeField& phi,
                                 const CylinderWindow& window, FaceAveraging averaging) {
  if (a.num_levels() != phi.num_levels()) throw DomainError("space-time fields differ in length");
  const auto [k0, k1] = cylinder_levels(phi.dt, window);
  double sum = 0.0;
  for (Index k = k0; k <= std::min(k1, phi.num_levels() - 1); ++k) {
    const auto& ak = a.levels[static_cast<std::size_t>(k)];
    const auto& pk = phi.levels[static_cast<std::size_t>(k)];
    sum += weighted_dirichlet_energy(ak, pk, {window.ci, window.cj, window.radius}, averaging) *
           phi.dt;
  }
  return sum;
}

}  // namespace degtherm
