#pragma once

#include "degtherm/materials.hpp"
#include "degtherm/parabolic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace degtherm {

using SpaceFunction = std::function<double(double x, double y)>;
using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

struct Tolerances {
  double tol_couple = 1e-10;
  int max_couple = 50;
  PicardConfig picard;
  CgOptions cg;
  /// Slack allowed on the minimum principle and the potential bound.
  double invariant_tol = 1e-8;
  bool operator==(const Tolerances&) const = default;
};

/// The regularized problem: u_t - div(kappa(u) grad u) = div[(sigma(u)+eps) phi grad phi],
/// -div((sigma(u)+eps) grad phi) = 0, u = g and phi = h on the boundary, u(0) = u0.
struct ProblemSpec {
  Grid2D grid = Grid2D(16, 16, 1.0 / 16, 1.0 / 16);
  double T = 0.1;
  double dt = 1e-3;
  SpaceFunction u0;
  SpaceTimeFunction g;
  SpaceTimeFunction h;
  Materials materials;
  double eps = 1e-2;
  Tolerances tol;
  FaceAveraging averaging = FaceAveraging::Harmonic;
  /// Run a coarse pilot to bound the temperature range and validate (H1)-(H2) on it.
  bool validate_materials = true;

  Index num_steps() const;
};

struct SpecSummary {
  double c = 0.0;          // min(min u0, min over the boundary and time levels of g)
  double max_abs_h = 0.0;  // max over boundary nodes and time levels of |h|
  double sigma0 = 0.0;     // sup over s >= c of sigma(s)
  std::optional<ValidityReport> materials;
};

/// Checks positivity of u0 and g, compatibility g(., 0) = u0 on the boundary,
/// and 0 < eps < sigma0. Throws DomainError naming the violated hypothesis.
SpecSummary validate_spec(const ProblemSpec& spec);

struct StepDiagnostics {
  double t = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double max_abs_phi = 0.0;
  int coupling_iters = 0;
  int picard_iters = 0;
  int cg_iters = 0;
  double energy = 0.0;  // integral of (sigma + eps) |grad phi|^2 over the domain
};

struct RunResult {
  SpaceTimeField u;
  SpaceTimeField phi;
  std::vector<StepDiagnostics> diagnostics;  // one per level, including t = 0
  SpecSummary summary;
  double eps = 0.0;

  RunResult(const Grid2D& g, double dt) : u(g, dt), phi(g, dt) {}
};

class CouplingError : public Error {
 public:
  using Error::Error;
};

/// sigma(u) + eps at every node.
ScalarField sigma_eps_field(const ScalarField& u, const Materials& materials, double eps);

/// Gauss-Seidel coupling per step: potential solve with a = sigma(u*) + eps,
/// Joule flux, Picard temperature step, repeated until ||u_new - u*|| < tol_couple.
/// Aborts with InvariantViolation if the minimum principle, the potential bound
/// or the conductivity sandwich eps <= sigma + eps <= 2 sigma0 fails at any level.
RunResult run(const ProblemSpec& spec);

struct EpsSchedule {
  double eps0 = 1e-1;
  double gamma = 1e-1;
  int count = 4;

  double eps(int k) const;
  bool operator==(const EpsSchedule&) const = default;
};

struct CauchyReport {
  std::vector<double> eps;
  std::vector<double> d_u;    // ||u^{eps_{k+1}} - u^{eps_k}|| over all nodes and levels
  std::vector<double> d_phi;  // same for phi on the interior probe set
  bool complete = false;
  std::string error;
};

class ContinuationError : public Error {
 public:
  ContinuationError(const std::string& what, CauchyReport partial)
      : Error(what), report(std::move(partial)) {}
  CauchyReport report;
};

struct Continuation {
  std::vector<RunResult> runs;
  CauchyReport report;
  const RunResult& finest() const { return runs.back(); }
};

/// Interior probe box: nodes at distance >= 1/4 of the domain width from the boundary.
struct IndexBox {
  Index i0, i1, j0, j1;
};
IndexBox interior_probe_box(const Grid2D& g);

Continuation continue_eps(const ProblemSpec& spec, const EpsSchedule& schedule);

struct ContractionReport {
  double delta = 0.0;
  std::vector<double> t;
  std::vector<double> r;  // ||u_delta - u||_inf per level
  double sup_ratio = 0.0; // sup_t r / delta, 0 when delta = 0
  bool trivial = false;
};

/// Smooth interior bump with unit maximum, zero on the boundary.
double interior_bump(const Grid2D& g, double x, double y);

/// Runs spec and spec with u0 + delta * bump. base may supply the unperturbed run.
ContractionReport uniqueness_probe(const ProblemSpec& spec, double delta,
                                   const RunResult* base = nullptr);

}  // namespace degtherm
