#pragma once

#include "degtherm/funcnorms.hpp"
#include "degtherm/thermistor.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace degtherm {

/// Stability thresholds of the verification checks.
struct Thresholds {
  double energy_refinement = 2.0;  // max / min of the calibrated energy constant
  double energy_scaling = 0.01;    // |sqrt(E(2h) / E(h)) / 2 - 1|
  double bmo_growth = 1.25;        // beta(T) / beta(T/4)
  double a2_variation = 0.5;       // max / min - 1 of per-eps A2 maxima
  double holder_change = 0.25;     // relative change under refinement or eps
  double linear_horizon = 0.25;    // |rho(4T) / rho(T) - 1|
  double seed_spread = 3.0;        // factor about the median across seeds
  double uniqueness_spread = 2.0;  // max / min of sup_t r / delta
  double invariant_tol = 1e-8;

  bool operator==(const Thresholds&) const = default;
};

struct CheckContext {
  Index nx = 0;
  Index ny = 0;
  double dt = 0.0;
  double eps = 0.0;
  double T = 0.0;
};

struct Measurement {
  std::string name;
  double value = 0.0;
};

struct CheckEntry {
  std::string name;
  std::string property;   // the statement the check instruments
  std::string criterion;  // human-readable pass rule
  std::vector<Measurement> measured;
  double bound = 0.0;
  bool pass = false;
  bool trivial = false;  // 0/0 or all-zero data
  std::string note;
  CheckContext context;

  double value(const std::string& key) const;
};

struct VerifyReport {
  std::vector<CheckEntry> entries;

  bool passed() const;
  void append(const VerifyReport& other);
  void append(CheckEntry entry) { entries.push_back(std::move(entry)); }
  /// Fixed-width table: name, pass flag, headline value, bound.
  std::string summary_table() const;
};

std::string to_json(const VerifyReport& report, int indent = 2);

CheckContext context_of(const ProblemSpec& spec);
/// Levels with t <= horizon.
RunResult prefix(const RunResult& run, double horizon);

// -- invariants ---------------------------------------------------------------

CheckEntry check_maximum_principle(const RunResult& run, const CheckContext& ctx,
                                   double tol = 1e-8);
CheckEntry check_potential_bound(const RunResult& run, const CheckContext& ctx, double tol = 1e-8);

// -- energy -------------------------------------------------------------------

/// (sigma(u) + eps) |grad phi|^2 at nodes for every level.
SpaceTimeField joule_density(const ProblemSpec& spec, const RunResult& run);

/// sup over cylinders of R^{-2} integral over Q_R of (sigma + eps) |grad phi|^2.
NormReport energy_sup(const ProblemSpec& spec, const RunResult& run, const WindowPolicy& windows);

struct EnergySample {
  Index nx = 0;
  double sup = 0.0;
  double max_abs_h = 0.0;
};

/// C = sup E / max|h|^2 per grid; calibrated on the first (coarsest) sample.
CheckEntry check_energy_refinement(const std::vector<EnergySample>& samples,
                                   const Thresholds& thr);
/// sqrt(E(2h) / E(h)) = 2.
CheckEntry check_energy_scaling(const EnergySample& base, const EnergySample& doubled,
                                const Thresholds& thr);

// -- BMO ----------------------------------------------------------------------

/// max_{t <= T'} bmo_bar_norm(u(t)) for every T' = fraction * T, sampling every
/// time_subsample-th level (the last level is always included). The boundary trace
/// of each level is subtracted through its harmonic extension.
std::vector<double> bmo_horizons(const SpaceTimeField& u, const NormPolicy& policy,
                                 const std::vector<double>& fractions, Index time_subsample,
                                 bool subtract_boundary);

/// beta(T) / beta(T/4) over a run's own horizon.
CheckEntry check_uniform_bmo(const RunResult& run, const NormPolicy& policy,
                             Index time_subsample, const CheckContext& ctx, const Thresholds& thr);

enum class LinearSource { Bump, Divergence };

struct LinearExperimentConfig {
  Index n = 64;  // cells per axis on the unit square
  double T = 0.25;
  double dt = 2.5e-3;
  double contrast = 100.0;  // checkerboard values {1, contrast}
  Index blocks = 8;         // spatial blocks per axis
  double time_block = 0.125;
  /// Alternating: every time block swaps the two values of one random spatial
  /// pattern. Redraw: an independent spatial pattern per time block.
  enum class TimePattern { Alternating, Redraw };
  TimePattern time_pattern = TimePattern::Alternating;
  bool uniform_coefficient = false;  // a = 1
  double source_scale = 1.0;
  int horizon_factor = 4;
  Index time_subsample = 2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  CgOptions cg;

  bool operator==(const LinearExperimentConfig&) const = default;
};

/// Random space-time checkerboard a(x, t) in {1, contrast} on blocks x time blocks.
ScalarField checkerboard_coefficient(const Grid2D& g, double t, const LinearExperimentConfig& cfg,
                                     std::uint64_t seed);

struct LinearRun {
  LinearSource source = LinearSource::Bump;
  std::uint64_t seed = 0;
  double beta_T = 0.0, beta_long = 0.0;    // max_t BMO-bar of u up to T and horizon_factor T
  double morrey_T = 0.0, morrey_long = 0.0;
  double rho_T = 0.0, rho_long = 0.0;
  bool trivial = false;
};

/// u_t - div(a grad u) = f0 (Bump) or div f (Divergence), u0 = g = 0.
LinearRun run_linear_experiment(const LinearExperimentConfig& cfg, LinearSource source,
                                std::uint64_t seed, const NormPolicy& policy);

/// Horizon stability of rho, seed spread of rho and horizon growth of beta per source.
VerifyReport linear_bmo_experiment(const LinearExperimentConfig& cfg, const NormPolicy& policy,
                                   const Thresholds& thr, std::vector<LinearRun>* runs = nullptr,
                                   std::vector<LinearSource> sources = {LinearSource::Bump,
                                                                        LinearSource::Divergence});

// -- A2, Holder, continuation, uniqueness ------------------------------------

/// Per-eps max over sampled levels of a2_constant(sigma(u) + eps), the weight
/// extended by sigma(c) + eps outside the domain.
CheckEntry check_a2_uniform(const ProblemSpec& spec, const Continuation& cont,
                            const NormPolicy& policy, Index time_subsample, const Thresholds& thr);

/// Holder seminorm of u on the closed space-time domain.
NormReport holder_u(const RunResult& run, const NormPolicy& policy);
/// Holder seminorm of phi on the interior probe box.
NormReport holder_phi_interior(const RunResult& run, const NormPolicy& policy);

CheckEntry check_holder_refinement(const std::string& field, double coarse, double fine,
                                   double alpha, const Thresholds& thr);
CheckEntry check_holder_eps(const std::string& field, const std::vector<double>& eps,
                            const std::vector<double>& values, double alpha,
                            const Thresholds& thr);

/// d_k nonincreasing for k >= 1.
CheckEntry check_cauchy(const CauchyReport& report);

CheckEntry check_uniqueness(const std::vector<ContractionReport>& probes, const Thresholds& thr);

// -- campaign -----------------------------------------------------------------

enum class Mutation { None, ArithmeticAveraging };

struct CampaignConfig {
  ProblemSpec spec;             // reference spec at the middle refinement level
  EpsSchedule schedule;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  std::vector<Index> refinement{32, 64, 128};  // cells per axis
  int horizon_factor = 4;
  NormPolicy norms;
  bool auto_stride = true;  // window stride max(1, nx / 32) on each grid
  Index time_subsample = 4;
  std::vector<double> alphas{0.1, 0.25};
  LinearExperimentConfig linear;
  bool run_linear = true;
  Thresholds thresholds;
  /// Test hook: replaces harmonic by arithmetic face averaging in every solve.
  Mutation mutation = Mutation::None;
};

struct CampaignResult {
  VerifyReport report;
  std::vector<std::string> log;
};

CampaignResult full_campaign(const CampaignConfig& config,
                             const std::function<void(const std::string&)>& progress = {});

}  // namespace degtherm
