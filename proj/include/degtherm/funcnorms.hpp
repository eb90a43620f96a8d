#pragma once

#include "degtherm/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace degtherm {

struct NormPolicy {
  WindowPolicy windows;
  /// Value carried by the whole-plane extension outside the domain. Used by
  /// bmo_norm; a2_constant extends by it when positive and clips to the domain otherwise.
  double c_ext = 0.0;
  double p = 1.0;
  double theta = 1.0;
  double alpha = 0.25;
  std::uint64_t seed = 1;
  Index random_pairs = 20000;

  /// Throws DomainError when radii, p, theta or alpha fall outside their ranges.
  void validate(const Grid2D& g) const;
};

struct NormReport {
  double value = 0.0;
  Index family_size = 0;
  /// Argmax window. ck and the time window are set for space-time norms only.
  Index ci = 0;
  Index cj = 0;
  Index ck = -1;
  double radius = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  /// Second point of the argmax pair for Holder seminorms.
  Index ci2 = 0, cj2 = 0, ck2 = -1;
  std::string norm;
  NormPolicy policy;
  std::string metadata;
};

/// Mean oscillation (1/|B|) sum_B |f - f_B| over the window family, with f
/// extended by c_ext outside the domain. Nodes carry their clipped cell measure;
/// the part of the lattice disc outside the domain carries c_ext.
NormReport bmo_norm(const ScalarField& f, const NormPolicy& policy);

/// Harmonic function with the boundary trace of f; constant when the trace is.
ScalarField harmonic_extension(const ScalarField& f);

/// Interior-centered windows give mean oscillation over B and the domain,
/// boundary-centered windows give (1/|B and domain|) sum |f|. When boundary_data is
/// given and its trace is nonzero, its harmonic extension is subtracted first.
NormReport bmo_bar_norm(const ScalarField& f, const ScalarField* boundary_data,
                        const NormPolicy& policy);

/// max over windows of (R^{-2 theta} sum_{B and domain} |f|^p dx dy)^{1/p}.
NormReport morrey_norm(const ScalarField& f, const NormPolicy& policy);

/// Cylinder version with R^{-4 theta} and space-time measure; level 0 is excluded.
NormReport parabolic_morrey_norm(const SpaceTimeField& f, const NormPolicy& policy);

/// max over windows of (R^{-2 theta} sum_{B and domain} |f - f_B|^p dx dy)^{1/p}.
NormReport campanato_norm(const ScalarField& f, const NormPolicy& policy);
NormReport parabolic_campanato_norm(const SpaceTimeField& f, const NormPolicy& policy);

/// Parabolic Morrey sup for a nonnegative density q with p = 1:
/// max over cylinders of R^{-4 theta} sum_Q q dx dy dt. Energy checks pass q = a |grad phi|^2.
NormReport cylinder_density_sup(const SpaceTimeField& density, const NormPolicy& policy);

/// max over windows of (avg_B w)(avg_B 1/w). Throws DomainError on w <= 0.
NormReport a2_constant(const ScalarField& w, const NormPolicy& policy);

/// max |f(x,t) - f(y,s)| / (|x - y|^alpha + |t - s|^{alpha/2}) over every
/// dyadic separation along x, y and t plus policy.random_pairs seeded random pairs.
NormReport holder_seminorm(const SpaceTimeField& f, const NormPolicy& policy);

/// Same quotient over all pairs of distinct space-time nodes.
NormReport holder_seminorm_exhaustive(const SpaceTimeField& f, double alpha);

struct LevelSetRow {
  double lambda = 0.0;
  double fraction = 0.0;        // |f - f_B| > lambda
  double upper_fraction = 0.0;  // f - f_B > lambda
};

struct LevelSetTable {
  BallWindow window;
  double mean = 0.0;
  double bmo = 0.0;
  std::vector<LevelSetRow> rows;
};

/// Level-set fractions (cell-measure weighted, over B and the domain) at
/// lambda_j = j * bmo for j = 0 .. count - 1.
LevelSetTable nirenberg_level_sets(const ScalarField& f, const BallWindow& window, double bmo,
                                   int count = 8);
/// Same at explicit thresholds.
LevelSetTable nirenberg_level_sets(const ScalarField& f, const BallWindow& window,
                                   const std::vector<double>& lambdas);

}  // namespace degtherm
