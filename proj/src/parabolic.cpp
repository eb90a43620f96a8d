#include "degtherm/parabolic.hpp"

#include <cmath>

namespace degtherm {

ScalarField step_linear(const ParabolicStepInput& input, const ScalarField& a,
                        const CgOptions& cg, LinearSolveStats* stats) {
  const Grid2D& g = input.u_prev.grid;
  if (!(input.dt > 0.0)) throw DomainError("parabolic step needs dt > 0");
  if (!(a.grid == g) || !(input.g_bc.grid == g)) throw DomainError("step fields must share one grid");
  if (!a.all_finite() || !(a.values.minCoeff() > 0.0))
    throw DomainError("parabolic coefficient must be positive and finite");
  if (input.ellipticity) {
    const double K = *input.ellipticity;
    if (a.values.minCoeff() < 1.0 / K * (1.0 - 1e-12) || a.values.maxCoeff() > K * (1.0 + 1e-12))
      throw DomainError("prescribed coefficient violates 1/K <= a <= K");
  }

  const DiffusionOperator op(face_coefficients(a, input.averaging), 1.0 / input.dt);

  // w: interior from u_prev, boundary from g at the new time.
  ScalarField w = input.g_bc;
  op.scatter_interior(op.gather_interior(input.u_prev), w);

  Eigen::VectorXd source = Eigen::VectorXd::Zero(op.num_unknowns());
  if (input.F) source += op.gather_interior(divergence(*input.F));
  if (input.f0) source += op.gather_interior(*input.f0);
  const double scale =
      (op.gather_interior(input.u_prev) / input.dt + source + op.boundary_rhs(input.g_bc)).norm();
  const Eigen::VectorXd rhs = source - op.apply_full(w);

  Eigen::VectorXd delta;
  const LinearSolveStats st = solve_interior(op, rhs, delta, scale, cg);
  if (stats) *stats = st;
  for (Index j = 1; j < g.ny(); ++j)
    for (Index i = 1; i < g.nx(); ++i) w(i, j) += delta[op.unknown(i, j)];
  w.t = input.u_prev.t + input.dt;
  return w;
}

ScalarField step_linear(const ParabolicStepInput& input, const CgOptions& cg,
                        LinearSolveStats* stats) {
  if (!input.a) throw DomainError("step_linear needs a prescribed coefficient");
  return step_linear(input, *input.a, cg, stats);
}

NonlinearStep step_nonlinear(const ParabolicStepInput& input, const Materials& materials,
                             const PicardConfig& picard, const CgOptions& cg,
                             const ScalarField* start) {
  if (!(picard.tol_picard > 0.0) || picard.max_picard < 1)
    throw DomainError("Picard config needs tol_picard > 0 and max_picard >= 1");
  const Grid2D& g = input.u_prev.grid;
  NonlinearStep out{start ? *start : input.u_prev};
  ScalarField a(g);
  for (int m = 1; m <= picard.max_picard; ++m) {
    for (Index k = 0; k < g.num_nodes(); ++k) a.values[k] = materials.kappa(out.u.values[k]);
    LinearSolveStats st;
    ScalarField next = step_linear(input, a, cg, &st);
    out.cg_iterations += st.iterations;
    out.iterations = m;
    out.last_delta = (next.values - out.u.values).lpNorm<Eigen::Infinity>();
    out.u = std::move(next);
    if (materials.conductivity.is_constant() || out.last_delta < picard.tol_picard) return out;
  }
  throw PicardError("Picard iteration did not converge in " + std::to_string(picard.max_picard) +
                        " iterations (last delta " + format_double(out.last_delta) +
                        "); reduce dt",
                    out.last_delta);
}

FaceVectorField joule_flux(const ScalarField& sigma_eps, const ScalarField& phi,
                           FaceAveraging averaging) {
  const Grid2D& g = phi.grid;
  FaceVectorField G = face_coefficients(sigma_eps, averaging);
  const FaceVectorField grad = gradient(phi);
  for (Index j = 0; j <= g.ny(); ++j)
    for (Index i = 0; i < g.nx(); ++i)
      G.x_face(i, j) *= 0.5 * (phi(i, j) + phi(i + 1, j)) * grad.x_face(i, j);
  for (Index j = 0; j < g.ny(); ++j)
    for (Index i = 0; i <= g.nx(); ++i)
      G.y_face(i, j) *= 0.5 * (phi(i, j) + phi(i, j + 1)) * grad.y_face(i, j);
  return G;
}

ScalarField joule_pointwise(const ScalarField& sigma_eps, const ScalarField& phi,
                            FaceAveraging averaging) {
  return face_energy_to_nodes(face_energy_density(sigma_eps, phi, averaging));
}

}  // namespace degtherm
