#pragma once

#include "degtherm/mesh.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <string>

namespace degtherm {

/// How node coefficients become face coefficients. Arithmetic exists only as
/// a mutation hook for the verification harness.
enum class FaceAveraging { Harmonic, Arithmetic };

/// a_{i+1/2,j} = 2 a_i a_{i+1} / (a_i + a_{i+1}) (or the arithmetic mean).
FaceVectorField face_coefficients(const ScalarField& a,
                                  FaceAveraging averaging = FaceAveraging::Harmonic);

struct LinearSolveStats {
  int iterations = 0;
  double residual_norm = 0.0;
  double rhs_norm = 0.0;
  double relative_residual = 0.0;  // residual_norm / rhs_norm of the standard form
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, LinearSolveStats s) : Error(what), stats(s) {}
  LinearSolveStats stats;
};

struct CgOptions {
  double rtol = 1e-10;
  int max_iter = 0;  // 0 means 20 (nx + ny)
  bool operator==(const CgOptions&) const = default;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// shift I + L on interior nodes, with (L w)_i = sum over faces c_f (w_i - w_nb) / h^2.
/// The matrix is symmetric, and an M-matrix when all face coefficients are positive.
class DiffusionOperator {
 public:
  DiffusionOperator(FaceVectorField coefficients, double shift = 0.0);

  const SparseMatrix& matrix() const { return matrix_; }
  const Eigen::VectorXd& inverse_diagonal() const { return inv_diag_; }
  const FaceVectorField& coefficients() const { return coef_; }
  const Grid2D& grid() const { return coef_.grid; }
  double shift() const { return shift_; }
  Index num_unknowns() const { return (grid().nx() - 1) * (grid().ny() - 1); }
  Index unknown(Index i, Index j) const { return (j - 1) * (grid().nx() - 1) + (i - 1); }

  /// (L w) at interior nodes for a full-grid field, shift excluded.
  Eigen::VectorXd apply_full(const ScalarField& w) const;
  /// Coupling of interior rows to the boundary values of w.
  Eigen::VectorXd boundary_rhs(const ScalarField& w) const;
  Eigen::VectorXd gather_interior(const ScalarField& f) const;
  void scatter_interior(const Eigen::VectorXd& v, ScalarField& f) const;

 private:
  FaceVectorField coef_;
  double shift_;
  SparseMatrix matrix_;
  Eigen::VectorXd inv_diag_;
};

/// Jacobi-preconditioned conjugate gradients on A x = b, starting from x and
/// stopping when ||r|| <= abs_tol. Reductions run in a fixed order.
LinearSolveStats conjugate_gradient(const SparseMatrix& A, const Eigen::VectorXd& inv_diag,
                                    const Eigen::VectorXd& b, Eigen::VectorXd& x, double abs_tol,
                                    int max_iter);

/// -div(a grad phi) = div F + s, phi = boundary on the boundary nodes.
struct EllipticProblem {
  ScalarField a;
  std::optional<FaceVectorField> F;
  std::optional<ScalarField> s;
  ScalarField boundary;
  FaceAveraging averaging = FaceAveraging::Harmonic;

  EllipticProblem(ScalarField coefficient, ScalarField boundary_values)
      : a(std::move(coefficient)), boundary(std::move(boundary_values)) {}
};

DiffusionOperator assemble(const EllipticProblem& problem);

struct EllipticSolution {
  ScalarField phi;
  LinearSolveStats stats;
};

/// CG solve of the assembled system. initial_guess supplies interior values.
EllipticSolution solve(const EllipticProblem& problem, const CgOptions& options = {},
                       const ScalarField* initial_guess = nullptr);

/// Solve of the shifted system (shift I + L) delta = rhs on interior nodes with
/// the tolerance scaled by rhs_scale; shared by the elliptic and parabolic steps.
LinearSolveStats solve_interior(const DiffusionOperator& op, const Eigen::VectorXd& rhs,
                                Eigen::VectorXd& delta, double rhs_scale, const CgOptions& options);

/// a_f |grad phi|^2 on faces, with a_f from the given averaging.
FaceVectorField face_energy_density(const ScalarField& a, const ScalarField& phi,
                                    FaceAveraging averaging = FaceAveraging::Harmonic);

/// Sum over window nodes of (face energy averaged to the node) times the node's
/// dual-cell area: the discrete integral of a |grad phi|^2 over B_R.
double weighted_dirichlet_energy(const ScalarField& a, const ScalarField& phi,
                                 const BallWindow& window,
                                 FaceAveraging averaging = FaceAveraging::Harmonic);

/// Same over a cylinder: levels k with t_top - R^2 < t_k <= t_top, t_k > 0, weighted by dt.
double weighted_dirichlet_energy(const SpaceTimeField& a, const SpaceTimeField& phi,
                                 const CylinderWindow& window,
                                 FaceAveraging averaging = FaceAveraging::Harmonic);

}  // namespace degtherm
