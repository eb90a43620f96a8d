#pragma once

#include "degtherm/elliptic.hpp"
#include "degtherm/materials.hpp"

#include <optional>

namespace degtherm {

/// One backward-Euler step of u_t - div(a grad u) = div F + f0 with u = g on the boundary.
struct ParabolicStepInput {
  ScalarField u_prev;
  double dt;
  ScalarField g_bc;  // boundary values at t_{k+1}; interior entries ignored
  std::optional<FaceVectorField> F;
  std::optional<ScalarField> f0;
  /// Prescribed coefficient at t_{k+1} (linear mode). Unused by step_nonlinear.
  std::optional<ScalarField> a;
  /// Declared ellipticity constant K: the prescribed a must satisfy 1/K <= a <= K.
  std::optional<double> ellipticity;
  FaceAveraging averaging = FaceAveraging::Harmonic;

  ParabolicStepInput(ScalarField u, double step, ScalarField boundary)
      : u_prev(std::move(u)), dt(step), g_bc(std::move(boundary)) {}
};

struct PicardConfig {
  double tol_picard = 1e-10;
  int max_picard = 50;
  bool operator==(const PicardConfig&) const = default;
};

class PicardError : public Error {
 public:
  PicardError(const std::string& what, double delta) : Error(what), last_delta(delta) {}
  double last_delta;
};

/// (I/dt + L_a) u_next = u_prev/dt + div F + f0, solved for the increment
/// u_next - u_prev so that steady states are reproduced exactly.
ScalarField step_linear(const ParabolicStepInput& input, const CgOptions& cg = {},
                        LinearSolveStats* stats = nullptr);

/// step_linear with a prescribed coefficient field.
ScalarField step_linear(const ParabolicStepInput& input, const ScalarField& a,
                        const CgOptions& cg = {}, LinearSolveStats* stats = nullptr);

struct NonlinearStep {
  ScalarField u;
  int iterations = 0;
  int cg_iterations = 0;
  double last_delta = 0.0;
};

/// Picard iteration on a = kappa(u): freeze, solve, repeat until the max-norm
/// change drops below tol_picard. start is the first iterate (default u_prev).
NonlinearStep step_nonlinear(const ParabolicStepInput& input, const Materials& materials,
                             const PicardConfig& picard = {}, const CgOptions& cg = {},
                             const ScalarField* start = nullptr);

/// G = a_f * (arithmetic face mean of phi) * grad phi, with a = sigma + eps at nodes.
/// For phi solving the elliptic problem with the same face coefficients,
/// div G = 1/2 sum_f a_f |phi_nb - phi|^2 / h^2 >= 0 at every interior node.
FaceVectorField joule_flux(const ScalarField& sigma_eps, const ScalarField& phi,
                           FaceAveraging averaging = FaceAveraging::Harmonic);

/// a_f |grad phi|^2 averaged to nodes: the pointwise Joule power.
ScalarField joule_pointwise(const ScalarField& sigma_eps, const ScalarField& phi,
                            FaceAveraging averaging = FaceAveraging::Harmonic);

}  // namespace degtherm
